#pragma once

#include <cstdint>
#include <vector>

#include "geocluster/graph.hpp"
#include "geocluster/partition.hpp"

namespace geocluster {

// Leading right eigenvectors of D^-1 W. Row j of `coords` is the embedded
// position of vertex j; column c is the eigenvector for eigenvalues(c).
struct Embedding {
    RowMatrix coords;
    Vector eigenvalues;  // nonincreasing

    int size() const { return static_cast<int>(coords.rows()); }
    int dimension() const { return static_cast<int>(coords.cols()); }
};

// Computed from the symmetric matrix D^-1/2 W D^-1/2 and back-transformed with
// v = D^-1/2 u, so every column has unit norm in the D-weighted inner product.
Embedding embed(const GeoSocialGraph& graph, int k);

struct KMeansOptions {
    int max_iterations = 300;
};

struct KMeansResult {
    Partition partition;               // objective = final within-cluster SSE
    RowMatrix centers;
    std::vector<double> objective_trace;  // SSE after each assignment step
    int iterations = 0;
    bool converged = false;
};

// Lloyd iterations from k-means++ seeding. Deterministic for a given seed.
// Empty clusters are refilled with the point farthest from its center, so the
// result always has exactly min(k, n) nonempty clusters.
KMeansResult kmeans(const RowMatrix& points, int k, std::uint64_t seed, const KMeansOptions& options = {});

// Assignment-only convenience wrapper around kmeans().
Partition kmeans_partition(const RowMatrix& points, int k, std::uint64_t seed);

// embed(graph, k) followed by k-means on the embedded rows.
Partition spectral_cluster(const GeoSocialGraph& graph, int k, std::uint64_t seed);

}  // namespace geocluster
