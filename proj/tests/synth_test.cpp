#include <algorithm>
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "geocluster/error.hpp"
#include "geocluster/synth.hpp"

namespace geocluster {
namespace {

LabelCodes small_groups() {
    std::vector<std::string> raw;
    for (int g = 0; g < 31; ++g) {
        for (int m = 0; m < 3 + g % 6; ++m) raw.push_back("g" + std::to_string(g));
    }
    return encode_labels(raw);
}

std::int64_t intra_count(const SocialMatrix& s, const LabelCodes& l) {
    std::int64_t c = 0;
    for (const auto& [i, j] : s.pairs()) c += l.codes[i] == l.codes[j];
    return c;
}

TEST(GtMatrixTest, RoundHalfUp) {
    EXPECT_EQ(round_count(2.5), 3);
    EXPECT_EQ(round_count(2.4999), 2);
    EXPECT_EQ(round_count(0.5), 1);
    EXPECT_EQ(round_count(0.0), 0);
}

TEST(GtMatrixTest, FullAndEmpty) {
    const LabelCodes l = small_groups();
    const SocialMatrix full = gt_matrix(l, {1.0, 0.0, 3});
    EXPECT_EQ(static_cast<std::int64_t>(full.contact_count()), intra_pair_count(l));
    for (int i = 0; i < l.size(); ++i) {
        for (int j = i + 1; j < l.size(); ++j) EXPECT_EQ(full.contains(i, j), l.codes[i] == l.codes[j]);
    }
    for (double q : {0.0, 0.2, 1.0}) EXPECT_EQ(gt_matrix(l, {0.0, q, 4}).contact_count(), 0u);
}

TEST(GtMatrixTest, DenseFormIsSymmetricWithUnitDiagonal) {
    const LabelCodes l = small_groups();
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Matrix d = gt_matrix(l, {0.4, 0.3, seed}).dense();
        EXPECT_EQ(d, d.transpose());
        EXPECT_EQ(d.diagonal(), Vector::Ones(l.size()));
    }
}

TEST(GtMatrixTest, CountsAcrossSeeds) {
    const LabelCodes l = small_groups();
    const std::int64_t total = intra_pair_count(l);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const double p = static_cast<double>(seed % 11) / 10.0;
        const SocialMatrix base = gt_matrix(l, {p, 0.0, seed});
        const std::int64_t keep = round_count(p * static_cast<double>(total));
        ASSERT_EQ(static_cast<std::int64_t>(base.contact_count()), keep);
        ASSERT_EQ(intra_count(base, l), keep);
        for (double q : {0.1, 0.5}) {
            const SocialMatrix flipped = gt_matrix(l, {p, q, seed});
            ASSERT_EQ(flipped.contact_count(), base.contact_count());
            std::int64_t kept = 0;
            for (const auto& [i, j] : flipped.pairs()) kept += base.contains(i, j);
            ASSERT_EQ(kept, keep - round_count(q * static_cast<double>(keep)));
        }
    }
}

TEST(GtMatrixTest, InsufficientZeros) {
    const std::vector<std::string> one(6, "a");
    try {
        gt_matrix(encode_labels(one), {1.0, 0.5, 0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InsufficientZeros);
    }
}

TEST(GtMatrixTest, RejectsOutOfRange) {
    EXPECT_THROW(gt_matrix(small_groups(), {1.2, 0.0, 0}), Error);
    EXPECT_THROW(gt_matrix(small_groups(), {0.5, -0.1, 0}), Error);
}

TEST(GenerateTest, PresetMeetsTargets) {
    const SynthConfig c = hollenbeck_preset();
    const SynthResult r = generate_dataset(c);
    EXPECT_EQ(r.dataset.size(), 748);
    const LabelCodes l = dataset_labels(r.dataset.individuals);
    EXPECT_EQ(l.label_count(), 31);
    const Diagnostics d = diagnostics(r.dataset.social, l);
    EXPECT_EQ(d, r.diagnostics);
    EXPECT_NEAR(d.mean_degree, 1.2754, 0.1);
    EXPECT_NEAR(d.intra_fraction, 0.887, 0.02);
    EXPECT_NEAR(d.isolate_fraction, 0.42, 0.05);
    std::set<std::string> ids;
    for (const auto& ind : r.dataset.individuals) ids.insert(ind.id);
    EXPECT_EQ(ids.size(), 748u);
}

TEST(GenerateTest, DeterministicPerSeed) {
    SynthConfig c = hollenbeck_preset();
    c.seed = 3;
    EXPECT_EQ(generate_dataset(c).dataset, generate_dataset(c).dataset);
    SynthConfig other = c;
    other.seed = 4;
    EXPECT_FALSE(generate_dataset(c).dataset == generate_dataset(other).dataset);
}

TEST(GenerateTest, PureIntraTarget) {
    SynthConfig c = hollenbeck_preset();
    c.target_intra_fraction = 1.0;
    const SynthResult r = generate_dataset(c);
    EXPECT_DOUBLE_EQ(r.diagnostics.intra_fraction, 1.0);
}

TEST(GenerateTest, GroupSizesRespectMinimum) {
    SynthConfig c = hollenbeck_preset();
    c.group_size_cv = 1.5;
    const SynthResult r = generate_dataset(c);
    const LabelCodes l = dataset_labels(r.dataset.individuals);
    std::vector<int> sizes(l.label_count(), 0);
    for (int v : l.codes) ++sizes[v];
    EXPECT_GE(*std::min_element(sizes.begin(), sizes.end()), c.min_group_size);
}

TEST(GenerateTest, ExplicitCenters) {
    SynthConfig c = hollenbeck_preset();
    c.groups = 2;
    c.members = 200;
    c.territory_centers = std::vector<Point2>{{0, 0}, {10000, 0}};
    c.target_intra_fraction = 1.0;
    const SynthResult r = generate_dataset(c);
    for (const auto& ind : r.dataset.individuals) {
        const double cx = *ind.gang == "G1" ? 0.0 : 10000.0;
        EXPECT_LT(std::abs(ind.location.x - cx), 8 * c.spatial_spread);
    }
}

TEST(GenerateTest, CalibrationFailure) {
    SynthConfig c = hollenbeck_preset();
    c.target_isolate_fraction = 0.95;
    c.isolate_tolerance = 0.001;
    c.max_calibration_iterations = 3;
    try {
        generate_dataset(c);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::CalibrationFailure);
    }
}

TEST(GenerateTest, InvalidConfig) {
    SynthConfig c = hollenbeck_preset();
    c.members = 20;
    EXPECT_THROW(generate_dataset(c), Error);
    c = hollenbeck_preset();
    c.target_intra_fraction = 0.0;
    EXPECT_THROW(generate_dataset(c), Error);
}

}  // namespace
}  // namespace geocluster
