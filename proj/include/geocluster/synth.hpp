#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geocluster/graph.hpp"
#include "geocluster/metrics.hpp"

namespace geocluster {

struct GtParams {
    double p = 1.0;  // fraction of intra-group pairs kept
    double q = 0.0;  // fraction of kept pairs moved to random zero entries
    std::uint64_t seed = 0;
};

// Round half up; used for every fractional count in gt_matrix.
std::int64_t round_count(double x);

// GT(p, q): start from the full intra-group matrix, keep round(p T) of its T
// upper-triangular entries uniformly at random, then zero round(q K) of the K
// kept entries and set the same number of upper-triangular entries that were
// zero before the flip to 1. Diagonal is 1 and the result is symmetric.
//
// The keep step and the flip step draw from separate streams of `seed`, so
// calls that differ only in q share the same kept set.
SocialMatrix gt_matrix(const LabelCodes& labels, const GtParams& params);

// Number of upper-triangular same-label pairs (T above).
std::int64_t intra_pair_count(const LabelCodes& labels);

struct SynthConfig {
    int members = 748;
    int groups = 31;
    int min_group_size = 5;
    double group_size_cv = 0.5;       // lognormal shape of relative group sizes
    double spatial_spread = 250.0;    // metres, per-axis std of member locations
    double spacing_factor = 3.0;      // territory spacing / spread
    std::optional<std::vector<Point2>> territory_centers;  // auto-layout if empty

    double target_intra_fraction = 0.887;
    double target_mean_degree = 1.2754;
    double target_isolate_fraction = 0.42;
    double activity_sd = 1.0;     // lognormal shape of member activity
    double contact_scale = 0.15;  // partner proximity kernel width / territory spacing

    double degree_tolerance = 0.1;
    double intra_tolerance = 0.02;
    double isolate_tolerance = 0.05;
    int max_calibration_iterations = 50;

    std::uint64_t seed = 7;
};

// Parameters tuned to the published network statistics: 748 members in 31
// groups, mean degree 1.2754, 42% isolates, 88.7% intra-group contacts.
SynthConfig hollenbeck_preset();

struct SynthResult {
    Dataset dataset;
    Diagnostics diagnostics;
    int calibration_iterations = 0;
    double zero_activity_fraction = 0.0;  // calibrated
    double intra_probability = 0.0;       // calibrated
};

// Gaussian member locations around grid territories plus a two-level contact
// model, calibrated until the diagnostics meet the tolerances.
// Throws CalibrationFailure if they are not met within the iteration budget.
SynthResult generate_dataset(const SynthConfig& config);

}  // namespace geocluster
