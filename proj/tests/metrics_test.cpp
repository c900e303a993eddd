#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "geocluster/error.hpp"
#include "geocluster/metrics.hpp"
#include "oracles.hpp"

namespace geocluster {
namespace {

LabelCodes labels_from(const std::vector<int>& ids) {
    std::vector<std::string> s;
    for (int v : ids) s.push_back("g" + std::to_string(100 + v));
    return encode_labels(s);
}

std::vector<int> random_ids(std::mt19937_64& rng, int n, int k) {
    std::uniform_int_distribution<int> u(0, k - 1);
    std::vector<int> g(n);
    for (int& v : g) v = u(rng);
    return g;
}

TEST(LabelsTest, CodesFollowSortedNames) {
    const std::vector<std::string> raw{"b", "a", "c", "a"};
    const LabelCodes l = encode_labels(raw);
    EXPECT_EQ(l.codes, (std::vector<int>{1, 0, 2, 0}));
    EXPECT_EQ(l.names, (std::vector<std::string>{"a", "b", "c"}));
}

TEST(LabelsTest, MissingLabel) {
    std::vector<Individual> inds{{"x", {0, 0}, "a"}, {"y", {0, 0}, std::nullopt}};
    try {
        dataset_labels(inds);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MissingLabel);
    }
}

TEST(PurityTest, TrivialCases) {
    const std::vector<int> g{0, 0, 1, 1, 1, 2, 2, 0, 1, 1};
    const LabelCodes l = labels_from(g);
    EXPECT_DOUBLE_EQ(purity(l, canonical_partition(g)), 1.0);
    EXPECT_DOUBLE_EQ(purity(l, Partition{std::vector<int>(10, 0), 1}), 0.5);
    std::vector<int> singles(10);
    std::iota(singles.begin(), singles.end(), 0);
    EXPECT_DOUBLE_EQ(purity(l, Partition{singles, 10}), 1.0);
    EXPECT_THROW(purity(l, Partition{{0, 0}, 1}), Error);
}

TEST(PurityTest, MatchesCountingOracleAndPermutation) {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = random_ids(rng, 50, 6);
        const auto c = random_ids(rng, 50, 8);
        const LabelCodes l = labels_from(g);
        const Partition p = canonical_partition(c);
        const double pur = purity(l, p);
        EXPECT_DOUBLE_EQ(pur, oracle::purity(l.codes, p.assignment));

        std::vector<int> perm(50);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<int> gp(50), cp(50);
        for (int i = 0; i < 50; ++i) {
            gp[i] = g[perm[i]];
            cp[i] = c[perm[i]];
        }
        EXPECT_EQ(purity(labels_from(gp), canonical_partition(cp)), pur);
    }
}

TEST(PurityTest, RefinementNeverDecreases) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        const auto g = random_ids(rng, 40, 5);
        auto c = random_ids(rng, 40, 4);
        const LabelCodes l = labels_from(g);
        const double before = purity(l, canonical_partition(c));
        const int target = c[0];
        std::bernoulli_distribution half(0.5);
        for (int& v : c) {
            if (v == target && half(rng)) v = 99;
        }
        EXPECT_GE(purity(l, canonical_partition(c)), before);
    }
}

TEST(PairCountsTest, TrivialCases) {
    const std::vector<int> g{0, 0, 1, 1, 1, 2};
    const LabelCodes l = labels_from(g);
    const auto same = pair_counts(l, canonical_partition(g));
    EXPECT_EQ(same.total, 15);
    EXPECT_EQ(same.same_both, same.same_community);
    EXPECT_EQ(same.same_both, same.same_label);
    std::vector<int> singles(6);
    std::iota(singles.begin(), singles.end(), 0);
    const auto s = pair_counts(l, Partition{singles, 6});
    EXPECT_EQ(s.same_both, 0);
    EXPECT_EQ(s.same_community, 0);
}

TEST(PairCountsTest, MatchesAllPairsLoop) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        const auto g = random_ids(rng, 30, 4);
        const auto c = random_ids(rng, 30, 5);
        const LabelCodes l = labels_from(g);
        const Partition p = canonical_partition(c);
        const auto pc = pair_counts(l, p);
        EXPECT_EQ(pc.total, 435);
        EXPECT_EQ(pc.same_both, oracle::same_pairs(l.codes, p.assignment));
        EXPECT_EQ(pc.same_community, oracle::co_pairs(p.assignment));
        EXPECT_EQ(pc.same_label, oracle::co_pairs(l.codes));
        EXPECT_LE(pc.same_both, std::min(pc.same_community, pc.same_label));
    }
}

TEST(ZRandTest, SymmetricInRoles) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = random_ids(rng, 40, 4);
        auto c = g;
        for (int i = 0; i < 15; ++i) c[i] = static_cast<int>(rng() % 6);
        const double z1 = z_rand(labels_from(g), canonical_partition(c));
        const double z2 = z_rand(labels_from(c), canonical_partition(g));
        EXPECT_NEAR(z1, z2, 1e-12 * std::max(1.0, std::abs(z1)));
    }
}

TEST(ZRandTest, DegenerateCounts) {
    const LabelCodes l = labels_from({0, 0, 1, 1});
    try {
        z_rand(l, Partition{{0, 1, 2, 3}, 4});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DegenerateCounts);
    }
    try {
        z_rand(l, Partition{{0, 0, 0, 0}, 1});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DegenerateCounts);
    }
}

// w and z of random relabellings, sampled directly.
struct Sampled {
    double mean = 0.0;
    double sd = 0.0;
};

Sampled sample_w(const LabelCodes& l, const Partition& p, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto a = p.assignment;
    double sum = 0.0, ss = 0.0;
    for (int s = 0; s < samples; ++s) {
        std::shuffle(a.begin(), a.end(), rng);
        const double w = static_cast<double>(pair_counts(l, Partition{a, p.community_count}).same_both);
        sum += w;
        ss += w * w;
    }
    const double mean = sum / samples;
    return {mean, std::sqrt(ss / samples - mean * mean)};
}

TEST(ZRandTest, TwoEqualGroupsMatchesPermutationSampling) {
    const std::vector<int> g{0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
    const LabelCodes l = labels_from(g);
    const Partition p = canonical_partition(g);
    const auto mc = sample_w(l, p, 100000, 1);
    const auto pc = pair_counts(l, p);
    const double z_mc = (pc.same_both - mc.mean) / mc.sd;
    EXPECT_NEAR(z_rand(l, p), z_mc, 0.05 * z_mc);
}

TEST(ZRandTest, NullMeanNearZero) {
    std::mt19937_64 rng(5);
    double sum = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        sum += z_rand(labels_from(random_ids(rng, 100, 5)), canonical_partition(random_ids(rng, 100, 7)));
    }
    EXPECT_LE(std::abs(sum / 200), 0.2);
}

TEST(ZRandTest, HypergeometricFormula) {
    PairCounts pc{45, 20, 20, 20};
    const double mean = 20.0 * 20.0 / 45.0;
    const double var = mean * (1.0 - 20.0 / 45.0) * (45.0 - 20.0) / 44.0;
    EXPECT_NEAR(z_rand_hypergeometric(pc), (20.0 - mean) / std::sqrt(var), 1e-12);
}

TEST(DiagnosticsTest, HandBuilt) {
    SocialMatrix s(5);
    s.add(0, 1);
    s.add(0, 2);
    s.add(1, 3);
    const LabelCodes l = labels_from({0, 0, 1, 0, 1});
    const Diagnostics d = diagnostics(s, l);
    EXPECT_EQ(d.contacts, 3);
    EXPECT_DOUBLE_EQ(d.mean_degree, 1.2);
    EXPECT_EQ(d.max_degree, 2);
    EXPECT_EQ(d.isolates, 1);
    EXPECT_DOUBLE_EQ(d.isolate_fraction, 0.2);
    EXPECT_EQ(d.intra_contacts, 2);
    EXPECT_NEAR(d.intra_fraction, 2.0 / 3.0, 1e-15);
    // degrees {2, 2, 1, 1, 0}
    EXPECT_NEAR(d.degree_std, std::sqrt(2.8 / 4.0), 1e-15);
    EXPECT_NEAR(d.degree_std_population, std::sqrt(2.8 / 5.0), 1e-15);
}

TEST(DiagnosticsTest, EmptyContacts) {
    const Diagnostics d = diagnostics(SocialMatrix(4), labels_from({0, 1, 2, 3}));
    EXPECT_EQ(d.mean_degree, 0.0);
    EXPECT_EQ(d.isolates, 4);
    EXPECT_EQ(d.intra_fraction, 0.0);
}

TEST(SummaryTest, CompositionAndCentroid) {
    const LabelCodes l = encode_labels(std::vector<std::string>{"a", "b", "a", "b", "b"});
    const Partition p{{0, 0, 0, 1, 1}, 2};
    const std::vector<Point2> pts{{0, 0}, {3, 0}, {0, 3}, {10, 10}, {12, 10}};
    const auto s = summarize_communities(p, l, pts);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0].size, 3);
    EXPECT_EQ(s[0].plurality_label, "a");
    EXPECT_DOUBLE_EQ(s[0].composition[0].second, 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(s[0].centroid.x, 1.0);
    EXPECT_DOUBLE_EQ(s[0].centroid.y, 1.0);
    EXPECT_EQ(s[1].plurality_label, "b");
    EXPECT_DOUBLE_EQ(s[1].centroid.x, 11.0);
}

}  // namespace
}  // namespace geocluster
