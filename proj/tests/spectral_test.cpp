#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "geocluster/error.hpp"
#include "geocluster/metrics.hpp"
#include "geocluster/spectral.hpp"
#include "oracles.hpp"

namespace geocluster {
namespace {

GeoSocialGraph random_graph(std::uint64_t seed, int n, double alpha) {
    std::mt19937_64 rng(seed);
    const auto pts = oracle::random_points(rng, n, 1000.0);
    const auto s = oracle::random_social(rng, n, 0.1);
    return build_weight_matrix(pts, s, alpha, 300.0);
}

double residual(const GeoSocialGraph& g, const Embedding& e, int c) {
    const Matrix p = normalize(g);
    const Vector v = e.coords.col(c);
    return (p * v - e.eigenvalues(c) * v).cwiseAbs().maxCoeff();
}

// Two groups of co-located points `gap` apart.
std::vector<Point2> two_sites(int per_group, double gap) {
    std::vector<Point2> pts;
    for (int i = 0; i < per_group; ++i) pts.push_back({0.0, 0.0});
    for (int i = 0; i < per_group; ++i) pts.push_back({gap, 0.0});
    return pts;
}

TEST(EmbedTest, IdentityGraphHasUnitSpectrum) {
    std::mt19937_64 rng(1);
    const auto pts = oracle::random_points(rng, 8, 100.0);
    const auto g = build_weight_matrix(pts, SocialMatrix(8), 1.0, 10.0);
    const Embedding e = embed(g, 8);
    for (int c = 0; c < 8; ++c) EXPECT_NEAR(e.eigenvalues(c), 1.0, 1e-12);
}

TEST(EmbedTest, SecondVectorSplitsTwoBlocks) {
    const auto pts = two_sites(5, 300.0);
    const auto g = build_weight_matrix(pts, SocialMatrix(10), 0.0, 100.0);
    const Embedding e = embed(g, 2);
    const double sign = e.coords(0, 1) > 0 ? 1.0 : -1.0;
    for (int i = 0; i < 5; ++i) EXPECT_GT(sign * e.coords(i, 1), 0.0);
    for (int i = 5; i < 10; ++i) EXPECT_LT(sign * e.coords(i, 1), 0.0);
}

TEST(EmbedTest, ResidualsAndLeadingPair) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto g = random_graph(seed, 30, 0.4);
        const Embedding e = embed(g, 10);
        EXPECT_NEAR(e.eigenvalues(0), 1.0, 1e-8);
        for (int c = 0; c < 10; ++c) {
            EXPECT_LE(residual(g, e, c), 1e-8);
            if (c > 0) EXPECT_LE(e.eigenvalues(c), e.eigenvalues(c - 1));
        }
        const double v0 = e.coords(0, 0);
        for (int i = 0; i < 30; ++i) EXPECT_NEAR(e.coords(i, 0), v0, 1e-6 * std::abs(v0));
        // Unit norm in the D-weighted inner product.
        for (int c = 0; c < 10; ++c) {
            EXPECT_NEAR(e.coords.col(c).cwiseProduct(g.strength).dot(e.coords.col(c)), 1.0, 1e-10);
        }
    }
}

TEST(EmbedTest, MatchesJacobiOracle) {
    const auto g = random_graph(42, 30, 0.4);
    const Vector isd = g.strength.cwiseSqrt().cwiseInverse();
    const Matrix m = isd.asDiagonal() * g.weights * isd.asDiagonal();
    const auto [values, vectors] = oracle::jacobi_eigen(m);
    const Embedding e = embed(g, 30);
    for (int c = 0; c < 30; ++c) {
        EXPECT_NEAR(e.eigenvalues(c), values[c], 1e-8);
        const double gap = std::min(c > 0 ? values[c - 1] - values[c] : 1.0, c < 29 ? values[c] - values[c + 1] : 1.0);
        if (gap < 1e-4) continue;
        const Vector ref = isd.cwiseProduct(vectors.col(c));
        const double sign = ref.dot(e.coords.col(c)) >= 0 ? 1.0 : -1.0;
        EXPECT_LE((sign * e.coords.col(c) - ref).cwiseAbs().maxCoeff(), 1e-8);
    }
}

TEST(EmbedTest, RejectsBadDimension) {
    const auto g = random_graph(1, 5, 0.4);
    EXPECT_THROW(embed(g, 0), Error);
    EXPECT_THROW(embed(g, 6), Error);
}

TEST(KMeansTest, OneClusterGivesTotalVariance) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> nd;
    RowMatrix x(40, 3);
    for (int i = 0; i < 40; ++i) {
        for (int c = 0; c < 3; ++c) x(i, c) = nd(rng);
    }
    const auto r = kmeans(x, 1, 0);
    const RowMatrix centered = x.rowwise() - x.colwise().mean();
    EXPECT_NEAR(r.partition.objective, centered.squaredNorm(), 1e-9);
    EXPECT_EQ(r.partition.community_count, 1);
}

TEST(KMeansTest, KEqualsNGivesSingletons) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    RowMatrix x(12, 2);
    for (int i = 0; i < 12; ++i) x.row(i) << nd(rng), nd(rng);
    const auto r = kmeans(x, 12, 5);
    EXPECT_DOUBLE_EQ(r.partition.objective, 0.0);
    auto sorted = r.partition.assignment;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 12; ++i) EXPECT_EQ(sorted[i], i);
}

TEST(KMeansTest, RecoversSeparatedBlobs) {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> nd;
    RowMatrix x(200, 2);
    std::vector<std::string> truth;
    for (int i = 0; i < 200; ++i) {
        const int b = i % 4;
        x.row(i) << 100.0 * (b % 2) + nd(rng), 100.0 * (b / 2) + nd(rng);
        truth.push_back(std::to_string(b));
    }
    const LabelCodes labels = encode_labels(truth);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        EXPECT_DOUBLE_EQ(purity(labels, kmeans(x, 4, seed).partition), 1.0);
    }
}

TEST(KMeansTest, DeterministicAndMonotone) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    RowMatrix x(300, 5);
    for (int i = 0; i < 300; ++i) {
        for (int c = 0; c < 5; ++c) x(i, c) = nd(rng) + (i % 7);
    }
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto a = kmeans(x, 9, seed);
        const auto b = kmeans(x, 9, seed);
        EXPECT_EQ(a.partition.assignment, b.partition.assignment);
        EXPECT_TRUE(is_valid(a.partition));
        for (std::size_t t = 1; t < a.objective_trace.size(); ++t) {
            EXPECT_LE(a.objective_trace[t], a.objective_trace[t - 1] * (1 + 1e-12));
        }
        EXPECT_LE(a.partition.objective, a.objective_trace.back() * (1 + 1e-12));
    }
}

TEST(KMeansTest, PermutationEquivariantOnSeparatedData) {
    std::mt19937_64 rng(6);
    std::normal_distribution<double> nd;
    const int n = 60;
    RowMatrix x(n, 2);
    for (int i = 0; i < n; ++i) x.row(i) << 50.0 * (i % 3) + nd(rng), nd(rng);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    RowMatrix y(n, 2);
    for (int i = 0; i < n; ++i) y.row(i) = x.row(perm[i]);
    const auto a = canonical_partition(kmeans(x, 3, 1).partition.assignment);
    const auto pb = kmeans(y, 3, 1).partition.assignment;
    std::vector<int> back(n);
    for (int i = 0; i < n; ++i) back[perm[i]] = pb[i];
    EXPECT_EQ(canonical_partition(back).assignment, a.assignment);
}

TEST(KMeansTest, IdenticalPointsFlagged) {
    RowMatrix x = RowMatrix::Ones(10, 2);
    const auto r = kmeans(x, 3, 0);
    EXPECT_TRUE(r.partition.degenerate);
    EXPECT_TRUE(is_valid(r.partition));
    EXPECT_FALSE(kmeans(x, 1, 0).partition.degenerate);
}

TEST(SpectralClusterTest, TwoSitesRecovered) {
    const auto pts = two_sites(6, 5000.0);
    const auto g = build_weight_matrix(pts, SocialMatrix(12), 0.0, 100.0);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto p = canonical_partition(spectral_cluster(g, 2, seed).assignment);
        for (int i = 0; i < 6; ++i) EXPECT_EQ(p.assignment[i], 0);
        for (int i = 6; i < 12; ++i) EXPECT_EQ(p.assignment[i], 1);
    }
}

}  // namespace
}  // namespace geocluster
