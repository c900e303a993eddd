#include <limits>
#include <string>
#include <vector>

#include "geocluster/error.hpp"
#include "geocluster/random.hpp"
#include "geocluster/spectral.hpp"

namespace geocluster {
namespace {

double squared_distance(const RowMatrix& a, Eigen::Index i, const RowMatrix& b, Eigen::Index j) {
    const double* x = a.data() + i * a.cols();
    const double* y = b.data() + j * b.cols();
    double s = 0.0;
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
        const double d = x[c] - y[c];
        s += d * d;
    }
    return s;
}

bool all_identical(const RowMatrix& points) {
    for (Eigen::Index i = 1; i < points.rows(); ++i) {
        if (points.row(i) != points.row(0)) return false;
    }
    return true;
}

RowMatrix plus_plus_centers(const RowMatrix& points, int k, Rng& rng) {
    const Eigen::Index n = points.rows();
    RowMatrix centers(k, points.cols());
    std::vector<char> chosen(static_cast<std::size_t>(n), 0);
    std::vector<double> d2(static_cast<std::size_t>(n));

    Eigen::Index first = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
    centers.row(0) = points.row(first);
    chosen[static_cast<std::size_t>(first)] = 1;
    for (Eigen::Index i = 0; i < n; ++i) d2[static_cast<std::size_t>(i)] = squared_distance(points, i, centers, 0);

    for (int c = 1; c < k; ++c) {
        double total = 0.0;
        for (double v : d2) total += v;
        Eigen::Index next = -1;
        if (total > 0.0) {
            next = static_cast<Eigen::Index>(rng.weighted_index(d2, total));
        }
        if (next < 0 || chosen[static_cast<std::size_t>(next)]) {
            // Every remaining point coincides with a center: lowest unused index.
            for (Eigen::Index i = 0; i < n; ++i) {
                if (!chosen[static_cast<std::size_t>(i)]) {
                    next = i;
                    break;
                }
            }
        }
        centers.row(c) = points.row(next);
        chosen[static_cast<std::size_t>(next)] = 1;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double d = squared_distance(points, i, centers, c);
            if (d < d2[static_cast<std::size_t>(i)]) d2[static_cast<std::size_t>(i)] = d;
        }
    }
    return centers;
}

// Nearest center per point (lowest index on ties); returns the SSE.
double assign(const RowMatrix& points, const RowMatrix& centers, std::vector<int>& labels,
              std::vector<double>& cost) {
    double sse = 0.0;
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        int best = 0;
        double best_d = squared_distance(points, i, centers, 0);
        for (Eigen::Index c = 1; c < centers.rows(); ++c) {
            const double d = squared_distance(points, i, centers, c);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(c);
            }
        }
        labels[static_cast<std::size_t>(i)] = best;
        cost[static_cast<std::size_t>(i)] = best_d;
        sse += best_d;
    }
    return sse;
}

// Moves the point farthest from its center into each empty cluster.
double repair_empty(const RowMatrix& points, RowMatrix& centers, std::vector<int>& labels,
                    std::vector<double>& cost, double sse) {
    const int k = static_cast<int>(centers.rows());
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (int l : labels) ++counts[static_cast<std::size_t>(l)];
    for (int c = 0; c < k; ++c) {
        if (counts[static_cast<std::size_t>(c)] > 0) continue;
        std::size_t far = labels.size();
        double far_d = -1.0;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (counts[static_cast<std::size_t>(labels[i])] > 1 && cost[i] > far_d) {
                far_d = cost[i];
                far = i;
            }
        }
        if (far == labels.size()) break;  // fewer points than clusters
        --counts[static_cast<std::size_t>(labels[far])];
        labels[far] = c;
        counts[static_cast<std::size_t>(c)] = 1;
        centers.row(c) = points.row(static_cast<Eigen::Index>(far));
        sse -= cost[far];
        cost[far] = 0.0;
    }
    return sse;
}

double update_centers(const RowMatrix& points, const std::vector<int>& labels, RowMatrix& centers) {
    const int k = static_cast<int>(centers.rows());
    RowMatrix sums = RowMatrix::Zero(k, points.cols());
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        const int l = labels[static_cast<std::size_t>(i)];
        sums.row(l) += points.row(i);
        ++counts[static_cast<std::size_t>(l)];
    }
    for (int c = 0; c < k; ++c) {
        if (counts[static_cast<std::size_t>(c)] > 0) {
            centers.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
        }
    }
    double sse = 0.0;
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        sse += squared_distance(points, i, centers, labels[static_cast<std::size_t>(i)]);
    }
    return sse;
}

}  // namespace

KMeansResult kmeans(const RowMatrix& points, int k, std::uint64_t seed, const KMeansOptions& options) {
    const Eigen::Index n = points.rows();
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "k-means on an empty point set");
    if (k < 1 || k > n) {
        throw Error(ErrorCode::InvalidArgument,
                    "cluster count " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
    }

    Rng rng(mix_seed(seed, 0x6b6d));
    KMeansResult result;
    result.centers = plus_plus_centers(points, k, rng);

    std::vector<int> labels(static_cast<std::size_t>(n), -1);
    std::vector<int> previous;
    std::vector<double> cost(static_cast<std::size_t>(n));
    for (int iter = 0; iter < options.max_iterations; ++iter) {
        previous = labels;
        double sse = assign(points, result.centers, labels, cost);
        sse = repair_empty(points, result.centers, labels, cost, sse);
        result.objective_trace.push_back(sse);
        result.iterations = iter + 1;
        if (labels == previous) {
            result.converged = true;
            break;
        }
        update_centers(points, labels, result.centers);
    }
    const double sse = update_centers(points, labels, result.centers);

    result.partition.assignment = std::move(labels);
    result.partition.community_count = k;
    result.partition.objective = sse;
    result.partition.degenerate = k > 1 && all_identical(points);
    return result;
}

Partition kmeans_partition(const RowMatrix& points, int k, std::uint64_t seed) {
    return kmeans(points, k, seed).partition;
}

}  // namespace geocluster
