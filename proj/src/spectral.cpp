#include "geocluster/spectral.hpp"

#include <string>

#include <Eigen/Eigenvalues>

#include "geocluster/error.hpp"

namespace geocluster {

Embedding embed(const GeoSocialGraph& graph, int k) {
    const int n = graph.size();
    if (k < 1 || k > n) {
        throw Error(ErrorCode::InvalidArgument,
                    "embedding dimension " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
    }
    for (int i = 0; i < n; ++i) {
        if (!(graph.strength(i) > 0.0)) {
            throw Error(ErrorCode::ZeroStrength, "vertex " + std::to_string(i) + " has zero strength");
        }
    }

    const Vector inv_sqrt_d = graph.strength.cwiseSqrt().cwiseInverse();
    Matrix m = inv_sqrt_d.asDiagonal() * graph.weights * inv_sqrt_d.asDiagonal();
    // Exact symmetry so the solver sees the same matrix whichever triangle it reads.
    m = 0.5 * (m + m.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::ConvergenceFailure, "symmetric eigensolver did not converge");
    }

    // Eigen returns ascending eigenvalues; take the last k in reverse.
    Embedding out;
    out.eigenvalues.resize(k);
    out.coords.resize(n, k);
    for (int c = 0; c < k; ++c) {
        const int src = n - 1 - c;
        out.eigenvalues(c) = solver.eigenvalues()(src);
        out.coords.col(c) = inv_sqrt_d.cwiseProduct(solver.eigenvectors().col(src));
    }
    return out;
}

Partition spectral_cluster(const GeoSocialGraph& graph, int k, std::uint64_t seed) {
    const Embedding e = embed(graph, k);
    return kmeans(e.coords, k, seed).partition;
}

}  // namespace geocluster
