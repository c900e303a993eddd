#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "geocluster/graph.hpp"
#include "geocluster/partition.hpp"

namespace geocluster {

// Q = (1/2m) sum_ij [A_ij - gamma d_i d_j / 2m] delta(c_i, c_j), where d is the
// row-sum strength of `adjacency` and 2m = sum_i d_i. Diagonal entries count.
double modularity_score(const Matrix& adjacency, const Partition& partition, double gamma);

// Symmetrised random-walk matrix (P + P^T) / 2 with P = D^-1 W. Louvain runs on
// this; the edge term of Q is identical for P and its symmetrisation.
Matrix modularity_input(const GeoSocialGraph& graph);

struct LouvainOptions {
    // Called after every accepted vertex move with the resulting change in the
    // normalised quality (always > 0).
    std::function<void(double)> on_move;
    int max_sweeps_per_level = 1000;
};

// Multi-level greedy maximisation of modularity_score(adjacency, ., gamma).
// `adjacency` must be symmetric and nonnegative. The result's objective holds Q.
Partition louvain(const Matrix& adjacency, double gamma, std::uint64_t seed, const LouvainOptions& options = {});

struct Slice {
    std::shared_ptr<const Matrix> adjacency;
    double gamma = 1.0;
};

// Copies of a network at increasing resolution, each vertex coupled to its own
// copy in the neighbouring slices with weight omega.
class SliceStack {
public:
    SliceStack(std::vector<Slice> slices, double omega);

    // Same adjacency for every gamma in `gammas` (shared, not copied).
    static SliceStack over_gammas(std::shared_ptr<const Matrix> adjacency, const std::vector<double>& gammas,
                                  double omega);

    int vertex_count() const { return n_; }
    int slice_count() const { return static_cast<int>(slices_.size()); }
    double omega() const { return omega_; }
    const Slice& slice(int s) const { return slices_[static_cast<std::size_t>(s)]; }

private:
    std::vector<Slice> slices_;
    double omega_ = 0.0;
    int n_ = 0;
};

// Community id of every (vertex, slice). Ids are shared across slices and
// contiguous over the whole stack.
struct MultisliceAssignment {
    int vertex_count = 0;
    int slice_count = 0;
    std::vector<int> ids;  // slice-major: ids[s * vertex_count + i]
    int community_count = 0;
    double objective = 0.0;

    int at(int vertex, int slice) const {
        return ids[static_cast<std::size_t>(slice) * static_cast<std::size_t>(vertex_count) +
                   static_cast<std::size_t>(vertex)];
    }
    // Assignment restricted to one slice, relabelled contiguously.
    Partition slice_partition(int slice) const;
};

// Q_ms = (1/2mu) sum_ijsr [(A_ijs - gamma_s k_is k_js / 2m_s) delta_sr + delta_ij omega C_sr] delta(g_is, g_jr)
// with C the nearest-neighbour chain over slices.
double multislice_score(const SliceStack& stack, const MultisliceAssignment& assignment);

MultisliceAssignment multislice_louvain(const SliceStack& stack, std::uint64_t seed,
                                        const LouvainOptions& options = {});

}  // namespace geocluster
