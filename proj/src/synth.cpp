#include "geocluster/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

#include "geocluster/error.hpp"
#include "geocluster/random.hpp"

namespace geocluster {
namespace {

constexpr std::uint64_t kKeepStream = 0x4b454550;
constexpr std::uint64_t kFlipStream = 0x464c4950;
constexpr std::uint64_t kLayoutStream = 1;
constexpr std::uint64_t kContactStream = 2;

// Index of the upper-triangular pair (i, j), i < j, in row-major order.
std::int64_t pair_index(std::int64_t n, std::int64_t i, std::int64_t j) {
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

std::vector<int> group_sizes(const SynthConfig& c, Rng& rng) {
    std::vector<double> w(static_cast<std::size_t>(c.groups));
    for (double& v : w) v = rng.lognormal(0.0, c.group_size_cv);
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    std::vector<int> sizes;
    for (double v : w) {
        sizes.push_back(std::max(c.min_group_size, static_cast<int>(std::floor(v / total * c.members))));
    }
    int sum = std::accumulate(sizes.begin(), sizes.end(), 0);
    while (sum < c.members) {
        ++sizes[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(c.groups)))];
        ++sum;
    }
    while (sum > c.members) {
        auto& s = sizes[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(c.groups)))];
        if (s > c.min_group_size) {
            --s;
            --sum;
        }
    }
    return sizes;
}

std::string group_name(int g, int groups) {
    const int width = static_cast<int>(std::to_string(groups).size());
    char buf[32];
    std::snprintf(buf, sizeof buf, "G%0*d", width, g + 1);
    return buf;
}

std::string member_id(int i, int members) {
    const int width = static_cast<int>(std::to_string(members).size());
    char buf[32];
    std::snprintf(buf, sizeof buf, "m%0*d", width, i + 1);
    return buf;
}

void validate(const SynthConfig& c) {
    auto fail = [](const std::string& m) { throw Error(ErrorCode::InvalidArgument, m); };
    if (c.groups < 1) fail("groups must be positive");
    if (c.min_group_size < 1) fail("min_group_size must be positive");
    if (c.members < c.groups * c.min_group_size) fail("too few members for the group count and minimum size");
    if (!(c.spatial_spread > 0.0) || !(c.spacing_factor > 0.0)) fail("spread and spacing must be positive");
    if (!(c.target_intra_fraction > 0.0 && c.target_intra_fraction <= 1.0)) {
        fail("target_intra_fraction must lie in (0, 1]");
    }
    if (!(c.target_mean_degree > 0.0)) fail("target_mean_degree must be positive");
    if (!(c.target_isolate_fraction >= 0.0 && c.target_isolate_fraction < 1.0)) {
        fail("target_isolate_fraction must lie in [0, 1)");
    }
    if (!(c.contact_scale > 0.0) || !(c.activity_sd >= 0.0) || !(c.group_size_cv >= 0.0)) {
        fail("contact_scale, activity_sd and group_size_cv must be nonnegative");
    }
    if (c.territory_centers && static_cast<int>(c.territory_centers->size()) != c.groups) {
        fail("territory_centers must list one center per group");
    }
}

struct ContactModel {
    const std::vector<int>& labels;
    const Matrix& kernel;  // partner proximity weights
    std::int64_t target_contacts;
    std::uint64_t seed;
    double activity_sd;

    SocialMatrix sample(double zero_fraction, double intra_probability) const {
        const int n = static_cast<int>(labels.size());
        Rng rng(seed);
        std::vector<double> activity(static_cast<std::size_t>(n));
        for (double& a : activity) {
            const double u = rng.uniform();
            const double v = rng.lognormal(0.0, activity_sd);
            a = u < zero_fraction ? 0.0 : v;
        }
        const double total = std::accumulate(activity.begin(), activity.end(), 0.0);
        SocialMatrix s(n);
        if (!(total > 0.0)) return s;

        std::vector<double> w(static_cast<std::size_t>(n));
        const std::int64_t max_tries = 100 * target_contacts;
        for (std::int64_t tries = 0; static_cast<std::int64_t>(s.contact_count()) < target_contacts && tries < max_tries;
             ++tries) {
            const int i = static_cast<int>(rng.weighted_index(activity, total));
            const bool intra = rng.uniform() < intra_probability;
            double wsum = 0.0;
            for (int j = 0; j < n; ++j) {
                const bool same = labels[static_cast<std::size_t>(j)] == labels[static_cast<std::size_t>(i)];
                double v = 0.0;
                if (j != i && same == intra) v = activity[static_cast<std::size_t>(j)] * kernel(j, i);
                w[static_cast<std::size_t>(j)] = v;
                wsum += v;
            }
            if (!(wsum > 0.0)) continue;
            const int j = static_cast<int>(rng.weighted_index(w, wsum));
            s.add(i, j);
        }
        return s;
    }
};

}  // namespace

std::int64_t round_count(double x) {
    return static_cast<std::int64_t>(std::floor(x + 0.5));
}

std::int64_t intra_pair_count(const LabelCodes& labels) {
    std::vector<std::int64_t> sizes(static_cast<std::size_t>(labels.label_count()), 0);
    for (int c : labels.codes) ++sizes[static_cast<std::size_t>(c)];
    std::int64_t t = 0;
    for (auto s : sizes) t += s * (s - 1) / 2;
    return t;
}

SocialMatrix gt_matrix(const LabelCodes& labels, const GtParams& params) {
    if (!(params.p >= 0.0 && params.p <= 1.0) || !(params.q >= 0.0 && params.q <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "p and q must lie in [0, 1]");
    }
    const int n = labels.size();
    const std::int64_t total_pairs = static_cast<std::int64_t>(n) * (n - 1) / 2;

    std::vector<SocialMatrix::Pair> intra;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (labels.codes[static_cast<std::size_t>(i)] == labels.codes[static_cast<std::size_t>(j)]) {
                intra.emplace_back(i, j);
            }
        }
    }
    const auto keep = static_cast<std::size_t>(round_count(params.p * static_cast<double>(intra.size())));
    Rng keep_rng(mix_seed(params.seed, kKeepStream));
    keep_rng.partial_shuffle(std::span<SocialMatrix::Pair>(intra), keep);
    intra.resize(keep);

    const auto flips = static_cast<std::size_t>(round_count(params.q * static_cast<double>(keep)));
    if (flips > 0) {
        const auto zeros = static_cast<std::size_t>(total_pairs) - keep;
        if (flips > zeros) {
            throw Error(ErrorCode::InsufficientZeros, std::to_string(flips) + " flips but only " +
                                                          std::to_string(zeros) + " zero entries");
        }
        std::vector<char> occupied(static_cast<std::size_t>(total_pairs), 0);
        for (const auto& [i, j] : intra) occupied[static_cast<std::size_t>(pair_index(n, i, j))] = 1;
        std::vector<SocialMatrix::Pair> zero_pairs;
        zero_pairs.reserve(zeros);
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (!occupied[static_cast<std::size_t>(pair_index(n, i, j))]) zero_pairs.emplace_back(i, j);
            }
        }
        Rng flip_rng(mix_seed(params.seed, kFlipStream));
        std::sort(intra.begin(), intra.end());
        flip_rng.partial_shuffle(std::span<SocialMatrix::Pair>(intra), flips);
        flip_rng.partial_shuffle(std::span<SocialMatrix::Pair>(zero_pairs), flips);
        std::copy_n(zero_pairs.begin(), flips, intra.begin());
    }
    return SocialMatrix::from_pairs(n, std::move(intra));
}

SynthConfig hollenbeck_preset() {
    return SynthConfig{};
}

SynthResult generate_dataset(const SynthConfig& config) {
    validate(config);
    Rng rng(mix_seed(config.seed, kLayoutStream));

    const std::vector<int> sizes = group_sizes(config, rng);
    const double spacing = config.spacing_factor * config.spatial_spread;
    std::vector<Point2> centers;
    if (config.territory_centers) {
        centers = *config.territory_centers;
    } else {
        const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(config.groups))));
        for (int g = 0; g < config.groups; ++g) {
            const double jx = rng.uniform(-0.25, 0.25);
            const double jy = rng.uniform(-0.25, 0.25);
            centers.push_back({(g % cols + jx) * spacing, (g / cols + jy) * spacing});
        }
    }

    SynthResult out;
    auto& individuals = out.dataset.individuals;
    std::vector<int> labels;
    for (int g = 0; g < config.groups; ++g) {
        const std::string name = group_name(g, config.groups);
        for (int m = 0; m < sizes[static_cast<std::size_t>(g)]; ++m) {
            const double dx = rng.normal(0.0, config.spatial_spread);
            const double dy = rng.normal(0.0, config.spatial_spread);
            const int index = static_cast<int>(individuals.size());
            individuals.push_back(Individual{member_id(index, config.members),
                                             {centers[static_cast<std::size_t>(g)].x + dx,
                                              centers[static_cast<std::size_t>(g)].y + dy},
                                             name});
            labels.push_back(g);
        }
    }
    const int n = static_cast<int>(individuals.size());

    const double width = config.contact_scale * spacing;
    const double inv = 1.0 / (2.0 * width * width);
    Matrix kernel(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double dx = individuals[static_cast<std::size_t>(i)].location.x -
                              individuals[static_cast<std::size_t>(j)].location.x;
            const double dy = individuals[static_cast<std::size_t>(i)].location.y -
                              individuals[static_cast<std::size_t>(j)].location.y;
            kernel(i, j) = std::exp(-(dx * dx + dy * dy) * inv);
        }
    }

    const ContactModel model{labels, kernel, round_count(n * config.target_mean_degree / 2.0),
                             mix_seed(config.seed, kContactStream), config.activity_sd};
    const LabelCodes codes = dataset_labels(individuals);

    double zero = 0.75 * config.target_isolate_fraction;
    double intra = config.target_intra_fraction;
    for (int it = 1; it <= config.max_calibration_iterations; ++it) {
        SocialMatrix s = model.sample(zero, intra);
        const Diagnostics d = diagnostics(s, codes);
        const double iso_err = config.target_isolate_fraction - d.isolate_fraction;
        const double intra_err = config.target_intra_fraction - d.intra_fraction;
        const double deg_err = config.target_mean_degree - d.mean_degree;
        if (std::abs(iso_err) <= config.isolate_tolerance && std::abs(intra_err) <= config.intra_tolerance &&
            std::abs(deg_err) <= config.degree_tolerance) {
            out.dataset.social = std::move(s);
            out.diagnostics = d;
            out.calibration_iterations = it;
            out.zero_activity_fraction = zero;
            out.intra_probability = intra;
            return out;
        }
        zero = std::clamp(zero + 0.8 * iso_err, 0.0, 0.95);
        intra = std::clamp(intra + intra_err, 0.0, 1.0);
    }
    throw Error(ErrorCode::CalibrationFailure, "diagnostics missed their targets after " +
                                                   std::to_string(config.max_calibration_iterations) +
                                                   " calibration iterations");
}

}  // namespace geocluster
