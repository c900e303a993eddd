#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace geocluster {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

double distance(const Point2& a, const Point2& b);

struct Individual {
    std::string id;
    Point2 location;              // planar, metres
    std::optional<std::string> gang;

    friend bool operator==(const Individual&, const Individual&) = default;
};

// Binary symmetric contact matrix S over individuals [0, n). Only off-diagonal
// unordered pairs are stored; the diagonal is implicitly 1.
class SocialMatrix {
public:
    using Pair = std::pair<int, int>;  // always first < second

    SocialMatrix() = default;
    explicit SocialMatrix(int n) : n_(n) {}

    // Bulk construction; pairs may be unordered and repeated.
    static SocialMatrix from_pairs(int n, std::vector<Pair> pairs);

    // Adds the contact {i, j}. Duplicates are ignored. Returns true if new.
    bool add(int i, int j);
    bool contains(int i, int j) const;

    int size() const { return n_; }
    std::size_t contact_count() const { return pairs_.size(); }

    // Contacts in ascending (first, second) order.
    const std::vector<Pair>& pairs() const { return pairs_; }

    std::vector<int> degrees() const;

    // Dense n x n matrix with unit diagonal.
    Matrix dense() const;

    friend bool operator==(const SocialMatrix&, const SocialMatrix&) = default;

private:
    int n_ = 0;
    std::vector<Pair> pairs_;  // sorted
};

struct Dataset {
    std::vector<Individual> individuals;
    SocialMatrix social;

    int size() const { return static_cast<int>(individuals.size()); }
    std::vector<Point2> locations() const;

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct GeoSocialGraph {
    Matrix weights;   // W, dense symmetric
    Vector strength;  // d_i = sum_j W_ij
    double alpha = 0.0;
    double sigma = 1.0;

    int size() const { return static_cast<int>(weights.rows()); }
};

// Mean plus population standard deviation of the distances between contact
// pairs.
double compute_sigma(std::span<const Point2> locations, const SocialMatrix& social);

// W_ij = alpha S_ij + (1 - alpha) exp(-d_ij^2 / sigma^2), with S_ii = 1.
GeoSocialGraph build_weight_matrix(std::span<const Point2> locations, const SocialMatrix& social,
                                   double alpha, double sigma);

// Row-stochastic D^-1 W.
Matrix normalize(const GeoSocialGraph& graph);

}  // namespace geocluster
