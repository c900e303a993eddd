#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "geocluster/baselines.hpp"
#include "geocluster/error.hpp"
#include "geocluster/spectral.hpp"

namespace geocluster {
namespace {

struct Moments {
    double weight = 0.0;
    double mx = 0.0, my = 0.0;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
};

// Lifts the smaller eigenvalue of a 2x2 covariance to at least `floor`.
std::array<double, 3> floored(std::array<double, 3> cov, double floor) {
    const auto [a, b, d] = cov;
    const double half_trace = 0.5 * (a + d);
    const double lambda_min = half_trace - std::hypot(0.5 * (a - d), b);
    if (lambda_min < floor) {
        cov[0] += floor - lambda_min;
        cov[2] += floor - lambda_min;
    }
    return cov;
}

void m_step(std::span<const Point2> points, const std::vector<double>& resp, int k, double reg,
            std::vector<GaussianComponent>& comps) {
    const std::size_t n = points.size();
    std::vector<Moments> mom(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < n; ++i) {
        for (int c = 0; c < k; ++c) {
            const double r = resp[i * static_cast<std::size_t>(k) + static_cast<std::size_t>(c)];
            auto& m = mom[static_cast<std::size_t>(c)];
            m.weight += r;
            m.mx += r * points[i].x;
            m.my += r * points[i].y;
        }
    }
    for (auto& m : mom) {
        if (m.weight > 0.0) {
            m.mx /= m.weight;
            m.my /= m.weight;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (int c = 0; c < k; ++c) {
            const double r = resp[i * static_cast<std::size_t>(k) + static_cast<std::size_t>(c)];
            auto& m = mom[static_cast<std::size_t>(c)];
            const double dx = points[i].x - m.mx;
            const double dy = points[i].y - m.my;
            m.sxx += r * dx * dx;
            m.sxy += r * dx * dy;
            m.syy += r * dy * dy;
        }
    }
    for (int c = 0; c < k; ++c) {
        const auto& m = mom[static_cast<std::size_t>(c)];
        auto& g = comps[static_cast<std::size_t>(c)];
        if (!(m.weight > 0.0)) {
            // Starved component: keep its mean, shrink it to the floor.
            g.weight = 0.0;
            g.covariance = {reg, 0.0, reg};
            continue;
        }
        g.weight = m.weight / static_cast<double>(n);
        g.mean = {m.mx, m.my};
        g.covariance = floored({m.sxx / m.weight, m.sxy / m.weight, m.syy / m.weight}, reg);
    }
}

// Fills resp with posterior probabilities; returns the log-likelihood.
double e_step(std::span<const Point2> points, const std::vector<GaussianComponent>& comps,
              std::vector<double>& resp) {
    const std::size_t k = comps.size();
    std::vector<double> log_norm(k), ixx(k), ixy(k), iyy(k);
    for (std::size_t c = 0; c < k; ++c) {
        const auto& [a, b, d] = comps[c].covariance;
        const double det = a * d - b * b;
        ixx[c] = d / det;
        ixy[c] = -b / det;
        iyy[c] = a / det;
        log_norm[c] = comps[c].weight > 0.0
                          ? std::log(comps[c].weight) - std::log(2.0 * std::numbers::pi) - 0.5 * std::log(det)
                          : -std::numeric_limits<double>::infinity();
    }
    double ll = 0.0;
    std::vector<double> lp(k);
    for (std::size_t i = 0; i < points.size(); ++i) {
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            const double dx = points[i].x - comps[c].mean.x;
            const double dy = points[i].y - comps[c].mean.y;
            lp[c] = log_norm[c] - 0.5 * (ixx[c] * dx * dx + 2.0 * ixy[c] * dx * dy + iyy[c] * dy * dy);
            top = std::max(top, lp[c]);
        }
        double s = 0.0;
        for (std::size_t c = 0; c < k; ++c) s += std::exp(lp[c] - top);
        const double lse = top + std::log(s);
        ll += lse;
        for (std::size_t c = 0; c < k; ++c) resp[i * k + c] = std::exp(lp[c] - lse);
    }
    return ll;
}

}  // namespace

GmmFit fit_gmm(std::span<const Point2> points, int k, std::uint64_t seed, const GmmOptions& options) {
    const int n = static_cast<int>(points.size());
    if (k < 1 || k > n) {
        throw Error(ErrorCode::InvalidArgument,
                    "component count " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
    }
    RowMatrix x(n, 2);
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(points[i].x) || !std::isfinite(points[i].y)) {
            throw Error(ErrorCode::InvalidArgument, "non-finite location");
        }
        x(i, 0) = points[i].x;
        x(i, 1) = points[i].y;
    }
    const double scale = 0.5 * ((x.col(0).array() - x.col(0).mean()).square().mean() +
                                (x.col(1).array() - x.col(1).mean()).square().mean());
    // Identical points still need a positive floor.
    const double reg = options.regularization * (scale > 0.0 ? scale : 1.0);

    const KMeansResult init = kmeans(x, k, seed, KMeansOptions{1});
    std::vector<double> resp(static_cast<std::size_t>(n) * static_cast<std::size_t>(k), 0.0);
    for (int i = 0; i < n; ++i) {
        resp[static_cast<std::size_t>(i) * static_cast<std::size_t>(k) +
             static_cast<std::size_t>(init.partition.assignment[static_cast<std::size_t>(i)])] = 1.0;
    }

    GmmFit fit;
    fit.components.resize(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) {
        fit.components[static_cast<std::size_t>(c)].mean = {init.centers(c, 0), init.centers(c, 1)};
    }
    m_step(points, resp, k, reg, fit.components);

    for (int it = 0; it < options.max_iterations; ++it) {
        const double ll = e_step(points, fit.components, resp);
        if (!std::isfinite(ll)) throw Error(ErrorCode::ConvergenceFailure, "EM log-likelihood is not finite");
        fit.log_likelihood.push_back(ll);
        fit.iterations = it + 1;
        if (it > 0 && ll - fit.log_likelihood[fit.log_likelihood.size() - 2] < options.tolerance) {
            fit.converged = true;
            break;
        }
        m_step(points, resp, k, reg, fit.components);
    }

    std::vector<int> labels(static_cast<std::size_t>(n));
    for (auto& g : fit.components) g.scale = std::sqrt(0.5 * (g.covariance[0] + g.covariance[2]));
    for (int i = 0; i < n; ++i) {
        int best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (int c = 0; c < k; ++c) {
            const auto& g = fit.components[static_cast<std::size_t>(c)];
            const double d = distance(points[i], g.mean) / g.scale;
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        labels[static_cast<std::size_t>(i)] = best;
    }
    fit.partition = compact_partition(labels);
    fit.partition.objective = fit.log_likelihood.empty() ? 0.0 : fit.log_likelihood.back();
    return fit;
}

Partition gmm_cluster(std::span<const Point2> points, int k, std::uint64_t seed) {
    return fit_gmm(points, k, seed).partition;
}

Partition kmeans_columns(const GeoSocialGraph& graph, int k, std::uint64_t seed) {
    const RowMatrix features = normalize(graph).transpose();
    return kmeans(features, k, seed).partition;
}

}  // namespace geocluster
