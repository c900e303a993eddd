#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "geocluster/graph.hpp"
#include "geocluster/partition.hpp"

namespace geocluster {

struct GmmOptions {
    int max_iterations = 500;
    double tolerance = 1e-8;       // absolute log-likelihood improvement
    double regularization = 1e-6;  // times the data variance; floor on covariance eigenvalues
};

struct GaussianComponent {
    double weight = 0.0;
    Point2 mean;
    std::array<double, 3> covariance{};  // xx, xy, yy
    double scale = 0.0;                  // sqrt of the mean covariance eigenvalue
};

struct GmmFit {
    std::vector<GaussianComponent> components;
    std::vector<double> log_likelihood;  // after each EM iteration
    int iterations = 0;
    bool converged = false;
    Partition partition;  // nearest mean in units of each component's scale
};

// EM for a mixture of k full-covariance 2-D Gaussians, initialised from one
// k-means pass over k-means++ centers.
GmmFit fit_gmm(std::span<const Point2> points, int k, std::uint64_t seed, const GmmOptions& options = {});

Partition gmm_cluster(std::span<const Point2> points, int k, std::uint64_t seed);

// k-means on the columns of D^-1 W, one feature vector per individual.
Partition kmeans_columns(const GeoSocialGraph& graph, int k, std::uint64_t seed);

}  // namespace geocluster
