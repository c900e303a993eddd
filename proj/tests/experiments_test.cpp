#include <cstdlib>

#include <gtest/gtest.h>

#include "geocluster/experiments.hpp"
#include "geocluster/io.hpp"
#include "geocluster/synth.hpp"

namespace geocluster {
namespace {

const Dataset& small_dataset() {
    static const Dataset d = [] {
        SynthConfig c = hollenbeck_preset();
        c.members = 120;
        c.groups = 6;
        c.seed = 5;
        return generate_dataset(c).dataset;
    }();
    return d;
}

ExperimentOptions options(int threads) {
    ExperimentOptions o;
    o.k = 6;
    o.runs = 3;
    o.seed = 2;
    o.threads = threads;
    o.dataset_name = "small";
    return o;
}

TEST(SummarizeTest, SampleStd) {
    const Stat s = summarize({1.0, 2.0, 3.0, 4.0});
    EXPECT_DOUBLE_EQ(s.mean, 2.5);
    EXPECT_NEAR(s.std, std::sqrt(5.0 / 3.0), 1e-15);
    EXPECT_EQ(summarize({7.0}).std, 0.0);
}

TEST(PlateauTest, FindsRunsOfThree) {
    const auto p = find_plateaus({5, 5, 5, 4, 4, 3, 3, 3, 3, 2});
    ASSERT_EQ(p.size(), 2u);
    EXPECT_EQ(p[0], (Plateau{0, 2, 5}));
    EXPECT_EQ(p[1], (Plateau{5, 8, 3}));
    EXPECT_TRUE(find_plateaus({1, 2, 1, 2}).empty());
    EXPECT_TRUE(find_plateaus({}).empty());
}

TEST(LocalMaximaTest, Edges) {
    EXPECT_EQ(local_maxima({1.0, 3.0, 2.0, 2.0, 4.0}), (std::vector<int>{1, 4}));
    EXPECT_EQ(local_maxima({2.0, 1.0}), (std::vector<int>{0}));
    EXPECT_TRUE(local_maxima({1.0, 1.0, 1.0}).empty());
}

TEST(ScoreTest, DegenerateZIsZero) {
    const LabelCodes l = encode_labels(std::vector<std::string>{"a", "a", "b", "b"});
    const RunResult r = score_partition(l, Partition{{0, 1, 2, 3}, 4}, 9);
    EXPECT_EQ(r.z_rand, 0.0);
    EXPECT_EQ(r.purity, 1.0);
    EXPECT_EQ(r.communities, 4);
}

TEST(SpectralRunTest, SeedsAndSingleRun) {
    ExperimentOptions o = options(1);
    const RunReport r = run_spectral(small_dataset(), 0.4, o);
    ASSERT_EQ(r.results.size(), 1u);
    ASSERT_EQ(r.results[0].runs.size(), 3u);
    for (int i = 0; i < 3; ++i) EXPECT_EQ(r.results[0].runs[i].seed, 2u + i);
    EXPECT_TRUE(r.diagnostics.has_value());
    EXPECT_EQ(r.results[0].summary.size(), static_cast<std::size_t>(r.results[0].runs[0].communities));
    o.runs = 1;
    const RunReport one = run_spectral(small_dataset(), 0.4, o);
    EXPECT_EQ(one.results[0].purity.std, 0.0);
    EXPECT_EQ(one.results[0].z_rand.std, 0.0);
}

TEST(SweepTest, RecordPerGridPoint) {
    const RunReport r = sweep_alpha(small_dataset(), {0.0, 0.5, 1.0}, options(1));
    ASSERT_EQ(r.results.size(), 3u);
    EXPECT_EQ(r.results[1].params.at("alpha"), 0.5);
    const RunReport gt = gt_sweep(small_dataset(), {0.8}, {0.0, 0.5, 1.0}, {0.0, 0.2}, options(1));
    EXPECT_EQ(gt.results.size(), 6u);
    ASSERT_TRUE(gt.analysis.equivalence_p.has_value());
    EXPECT_GE(*gt.analysis.equivalence_p, 0.0);
    EXPECT_LE(*gt.analysis.equivalence_p, 1.0);
    const RunReport b = run_baselines(small_dataset(), {0.0, 0.9}, options(1));
    EXPECT_EQ(b.results.size(), 5u);
    EXPECT_EQ(b.results[0].method, "gmm");
}

TEST(SweepTest, GtPerfectContactsRecoverLabels) {
    const RunReport gt = gt_sweep(small_dataset(), {1.0}, {1.0}, {0.0}, options(1));
    EXPECT_DOUBLE_EQ(gt.results[0].purity.mean, 1.0);
}

TEST(MultisliceTest, SliceRecordsAndAnalysis) {
    const std::vector<double> gammas{0.5, 1.0, 1.5, 2.0, 2.5};
    ExperimentOptions o = options(1);
    o.runs = 1;
    const RunReport r = run_multislice(small_dataset(), 0.4, gammas, 1.0, o);
    ASSERT_EQ(r.results.size(), gammas.size());
    for (std::size_t s = 0; s < gammas.size(); ++s) {
        EXPECT_EQ(r.results[s].params.at("gamma"), gammas[s]);
        EXPECT_EQ(r.results[s].method, "multislice");
    }
    std::vector<int> counts;
    for (const auto& rec : r.results) counts.push_back(rec.runs[0].communities);
    EXPECT_EQ(r.analysis.plateaus, find_plateaus(counts));
}

TEST(DeterminismTest, SameSeedSameBytes) {
    const auto a = report_to_json(sweep_alpha(small_dataset(), {0.2, 0.8}, options(1)));
    const auto b = report_to_json(sweep_alpha(small_dataset(), {0.2, 0.8}, options(1)));
    EXPECT_EQ(a, b);
}

TEST(DeterminismTest, ThreadCountDoesNotChangeOutput) {
    const auto one = report_to_json(gt_sweep(small_dataset(), {0.6}, {0.0, 0.5}, {0.0, 0.3}, options(1)));
    const auto four = report_to_json(gt_sweep(small_dataset(), {0.6}, {0.0, 0.5}, {0.0, 0.3}, options(4)));
    EXPECT_EQ(one, four);
}

TEST(ThreadsTest, EnvironmentCap) {
    setenv("GEOCLUSTER_THREADS", "2", 1);
    EXPECT_EQ(resolve_threads(8), 2);
    EXPECT_EQ(resolve_threads(1), 1);
    unsetenv("GEOCLUSTER_THREADS");
    EXPECT_GE(resolve_threads(0), 1);
}

}  // namespace
}  // namespace geocluster
