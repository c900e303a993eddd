#include "geocluster/modularity.hpp"

#include <algorithm>
#include <string>

#include "geocluster/error.hpp"

namespace geocluster {

double modularity_score(const Matrix& adjacency, const Partition& partition, double gamma) {
    const Eigen::Index n = adjacency.rows();
    if (adjacency.cols() != n || partition.size() != n) {
        throw Error(ErrorCode::DimensionMismatch, "adjacency and partition sizes differ");
    }
    if (!is_valid(partition)) throw Error(ErrorCode::InvalidArgument, "partition ids are not contiguous");

    const Vector d = adjacency.rowwise().sum();
    const double total = d.sum();
    if (!(total > 0.0)) throw Error(ErrorCode::EmptyGraph, "total strength is zero");

    const auto& c = partition.assignment;
    std::vector<double> community_strength(static_cast<std::size_t>(partition.community_count), 0.0);
    double inside = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        const int cj = c[static_cast<std::size_t>(j)];
        community_strength[static_cast<std::size_t>(cj)] += d(j);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (c[static_cast<std::size_t>(i)] == cj) inside += adjacency(i, j);
        }
    }
    double null_sum = 0.0;
    for (double k : community_strength) null_sum += k * k;
    return (inside - gamma * null_sum / total) / total;
}

Matrix modularity_input(const GeoSocialGraph& graph) {
    const Matrix p = normalize(graph);
    return 0.5 * (p + p.transpose());
}

SliceStack::SliceStack(std::vector<Slice> slices, double omega) : slices_(std::move(slices)), omega_(omega) {
    if (slices_.empty()) throw Error(ErrorCode::InvalidArgument, "slice stack is empty");
    if (!(omega >= 0.0)) throw Error(ErrorCode::InvalidArgument, "omega must be nonnegative");
    n_ = static_cast<int>(slices_.front().adjacency->rows());
    for (std::size_t s = 0; s < slices_.size(); ++s) {
        const auto& a = *slices_[s].adjacency;
        if (a.rows() != n_ || a.cols() != n_) {
            throw Error(ErrorCode::DimensionMismatch, "slice " + std::to_string(s) + " has a different size");
        }
        if (!(slices_[s].gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be positive");
        if (s > 0 && !(slices_[s].gamma > slices_[s - 1].gamma)) {
            throw Error(ErrorCode::InvalidArgument, "slice gammas must be strictly increasing");
        }
    }
}

SliceStack SliceStack::over_gammas(std::shared_ptr<const Matrix> adjacency, const std::vector<double>& gammas,
                                   double omega) {
    std::vector<Slice> slices;
    slices.reserve(gammas.size());
    for (double g : gammas) slices.push_back(Slice{adjacency, g});
    return SliceStack(std::move(slices), omega);
}

Partition MultisliceAssignment::slice_partition(int slice) const {
    const auto begin = ids.begin() + static_cast<std::ptrdiff_t>(slice) * vertex_count;
    return compact_partition(std::span<const int>(&*begin, static_cast<std::size_t>(vertex_count)));
}

double multislice_score(const SliceStack& stack, const MultisliceAssignment& assignment) {
    const int n = stack.vertex_count();
    const int slices = stack.slice_count();
    if (assignment.vertex_count != n || assignment.slice_count != slices ||
        assignment.ids.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(slices)) {
        throw Error(ErrorCode::DimensionMismatch, "assignment does not match the slice stack");
    }
    int max_id = -1;
    for (int id : assignment.ids) {
        if (id < 0) throw Error(ErrorCode::InvalidArgument, "negative community id");
        max_id = std::max(max_id, id);
    }

    double two_mu = 0.0;
    double quality = 0.0;
    for (int s = 0; s < slices; ++s) {
        const Matrix& a = *stack.slice(s).adjacency;
        const Vector d = a.rowwise().sum();
        const double total = d.sum();
        if (!(total > 0.0)) throw Error(ErrorCode::EmptyGraph, "slice " + std::to_string(s) + " is empty");
        two_mu += total;

        std::vector<double> k(static_cast<std::size_t>(max_id + 1), 0.0);
        double inside = 0.0;
        for (int j = 0; j < n; ++j) {
            const int cj = assignment.at(j, s);
            k[static_cast<std::size_t>(cj)] += d(j);
            for (int i = 0; i < n; ++i) {
                if (assignment.at(i, s) == cj) inside += a(i, j);
            }
        }
        double null_sum = 0.0;
        for (double v : k) null_sum += v * v;
        quality += inside - stack.slice(s).gamma * null_sum / total;
    }
    for (int s = 0; s + 1 < slices; ++s) {
        two_mu += 2.0 * stack.omega() * n;
        for (int i = 0; i < n; ++i) {
            if (assignment.at(i, s) == assignment.at(i, s + 1)) quality += 2.0 * stack.omega();
        }
    }
    return quality / two_mu;
}

}  // namespace geocluster
