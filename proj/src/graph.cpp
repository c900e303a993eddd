#include "geocluster/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "geocluster/error.hpp"

namespace geocluster {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::InvalidAlpha: return "InvalidAlpha";
        case ErrorCode::InvalidSigma: return "InvalidSigma";
        case ErrorCode::NoContacts: return "NoContacts";
        case ErrorCode::ZeroScale: return "ZeroScale";
        case ErrorCode::ZeroStrength: return "ZeroStrength";
        case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorCode::DegenerateInput: return "DegenerateInput";
        case ErrorCode::EmptyGraph: return "EmptyGraph";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::DegenerateCounts: return "DegenerateCounts";
        case ErrorCode::InsufficientZeros: return "InsufficientZeros";
        case ErrorCode::CalibrationFailure: return "CalibrationFailure";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::UnknownId: return "UnknownId";
        case ErrorCode::SelfContact: return "SelfContact";
        case ErrorCode::MissingLabel: return "MissingLabel";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

double distance(const Point2& a, const Point2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

bool SocialMatrix::add(int i, int j) {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) {
        throw Error(ErrorCode::InvalidArgument,
                    "contact (" + std::to_string(i) + ", " + std::to_string(j) + ") out of range");
    }
    if (i == j) throw Error(ErrorCode::SelfContact, "index " + std::to_string(i));
    const Pair p = std::minmax(i, j);
    auto it = std::lower_bound(pairs_.begin(), pairs_.end(), p);
    if (it != pairs_.end() && *it == p) return false;
    pairs_.insert(it, p);
    return true;
}

SocialMatrix SocialMatrix::from_pairs(int n, std::vector<Pair> pairs) {
    SocialMatrix s(n);
    for (auto& p : pairs) {
        if (p.first < 0 || p.second < 0 || p.first >= n || p.second >= n) {
            throw Error(ErrorCode::InvalidArgument, "contact (" + std::to_string(p.first) + ", " +
                                                        std::to_string(p.second) + ") out of range");
        }
        if (p.first == p.second) throw Error(ErrorCode::SelfContact, "index " + std::to_string(p.first));
        if (p.first > p.second) std::swap(p.first, p.second);
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    s.pairs_ = std::move(pairs);
    return s;
}

bool SocialMatrix::contains(int i, int j) const {
    if (i == j) return true;
    const Pair p = std::minmax(i, j);
    return std::binary_search(pairs_.begin(), pairs_.end(), p);
}

std::vector<int> SocialMatrix::degrees() const {
    std::vector<int> deg(static_cast<std::size_t>(n_), 0);
    for (const auto& [i, j] : pairs_) {
        ++deg[static_cast<std::size_t>(i)];
        ++deg[static_cast<std::size_t>(j)];
    }
    return deg;
}

Matrix SocialMatrix::dense() const {
    Matrix s = Matrix::Identity(n_, n_);
    for (const auto& [i, j] : pairs_) {
        s(i, j) = 1.0;
        s(j, i) = 1.0;
    }
    return s;
}

std::vector<Point2> Dataset::locations() const {
    std::vector<Point2> out;
    out.reserve(individuals.size());
    for (const auto& ind : individuals) out.push_back(ind.location);
    return out;
}

double compute_sigma(std::span<const Point2> locations, const SocialMatrix& social) {
    if (static_cast<int>(locations.size()) != social.size()) {
        throw Error(ErrorCode::DimensionMismatch, "locations and social matrix differ in size");
    }
    if (social.contact_count() == 0) throw Error(ErrorCode::NoContacts, "social matrix has no contacts");

    const double count = static_cast<double>(social.contact_count());
    double sum = 0.0;
    for (const auto& [i, j] : social.pairs()) sum += distance(locations[i], locations[j]);
    const double mean = sum / count;
    double ss = 0.0;
    for (const auto& [i, j] : social.pairs()) {
        const double dev = distance(locations[i], locations[j]) - mean;
        ss += dev * dev;
    }
    const double sigma = mean + std::sqrt(ss / count);
    if (!(sigma > 0.0)) throw Error(ErrorCode::ZeroScale, "all contact pairs are co-located");
    return sigma;
}

GeoSocialGraph build_weight_matrix(std::span<const Point2> locations, const SocialMatrix& social,
                                   double alpha, double sigma) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw Error(ErrorCode::InvalidAlpha, "alpha must lie in [0, 1], got " + std::to_string(alpha));
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw Error(ErrorCode::InvalidSigma, "sigma must be positive and finite, got " + std::to_string(sigma));
    }
    const int n = static_cast<int>(locations.size());
    if (n != social.size()) {
        throw Error(ErrorCode::DimensionMismatch, "locations and social matrix differ in size");
    }
    for (const auto& p : locations) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw Error(ErrorCode::InvalidArgument, "non-finite location");
        }
    }

    GeoSocialGraph g;
    g.alpha = alpha;
    g.sigma = sigma;
    g.weights.resize(n, n);
    const double sigma2 = sigma * sigma;
    const double geo = 1.0 - alpha;
    for (int j = 0; j < n; ++j) {
        g.weights(j, j) = alpha + geo;
        for (int i = j + 1; i < n; ++i) {
            const double dx = locations[i].x - locations[j].x;
            const double dy = locations[i].y - locations[j].y;
            const double w = geo * std::exp(-(dx * dx + dy * dy) / sigma2);
            g.weights(i, j) = w;
            g.weights(j, i) = w;
        }
    }
    for (const auto& [i, j] : social.pairs()) {
        g.weights(i, j) += alpha;
        g.weights(j, i) = g.weights(i, j);
    }
    g.strength = g.weights.rowwise().sum();
    return g;
}

Matrix normalize(const GeoSocialGraph& graph) {
    const int n = graph.size();
    for (int i = 0; i < n; ++i) {
        if (!(graph.strength(i) > 0.0)) {
            throw Error(ErrorCode::ZeroStrength, "vertex " + std::to_string(i) + " has zero strength");
        }
    }
    return graph.strength.cwiseInverse().asDiagonal() * graph.weights;
}

}  // namespace geocluster
