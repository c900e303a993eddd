#include "geocluster/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "geocluster/error.hpp"

namespace geocluster {
namespace {

void require_same_length(const LabelCodes& labels, const Partition& partition) {
    if (labels.size() != partition.size()) {
        throw Error(ErrorCode::LengthMismatch, std::to_string(labels.size()) + " labels for " +
                                                   std::to_string(partition.size()) + " assignments");
    }
    if (labels.size() == 0) throw Error(ErrorCode::InvalidArgument, "empty labelling");
}

std::int64_t choose2(std::int64_t s) { return s * (s - 1) / 2; }

// Contingency table, row-major by community.
std::vector<std::int64_t> contingency(const LabelCodes& labels, const Partition& partition) {
    const auto nl = static_cast<std::size_t>(labels.label_count());
    std::vector<std::int64_t> table(static_cast<std::size_t>(partition.community_count) * nl, 0);
    for (std::size_t i = 0; i < labels.codes.size(); ++i) {
        ++table[static_cast<std::size_t>(partition.assignment[i]) * nl + static_cast<std::size_t>(labels.codes[i])];
    }
    return table;
}

template <typename Sizes>
long double falling3_sum(const Sizes& sizes) {
    long double s = 0.0L;
    for (auto v : sizes) {
        const long double x = static_cast<long double>(v);
        s += x * (x - 1.0L) * (x - 2.0L);
    }
    return s;
}

std::vector<std::int64_t> label_sizes(const LabelCodes& labels) {
    std::vector<std::int64_t> sizes(static_cast<std::size_t>(labels.label_count()), 0);
    for (int c : labels.codes) ++sizes[static_cast<std::size_t>(c)];
    return sizes;
}

}  // namespace

LabelCodes encode_labels(std::span<const std::string> labels) {
    LabelCodes out;
    out.names.assign(labels.begin(), labels.end());
    std::sort(out.names.begin(), out.names.end());
    out.names.erase(std::unique(out.names.begin(), out.names.end()), out.names.end());
    out.codes.reserve(labels.size());
    for (const auto& l : labels) {
        out.codes.push_back(static_cast<int>(std::lower_bound(out.names.begin(), out.names.end(), l) -
                                             out.names.begin()));
    }
    return out;
}

LabelCodes dataset_labels(const std::vector<Individual>& individuals) {
    std::vector<std::string> labels;
    labels.reserve(individuals.size());
    for (const auto& ind : individuals) {
        if (!ind.gang || ind.gang->empty()) {
            throw Error(ErrorCode::MissingLabel, "individual '" + ind.id + "' has no group label");
        }
        labels.push_back(*ind.gang);
    }
    return encode_labels(labels);
}

double purity(const LabelCodes& labels, const Partition& partition) {
    require_same_length(labels, partition);
    const auto nl = static_cast<std::size_t>(labels.label_count());
    const auto table = contingency(labels, partition);
    std::int64_t correct = 0;
    for (int c = 0; c < partition.community_count; ++c) {
        const auto row = table.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(c) * nl);
        // max_element returns the first maximum, i.e. the smallest label.
        correct += *std::max_element(row, row + static_cast<std::ptrdiff_t>(nl));
    }
    return static_cast<double>(correct) / static_cast<double>(labels.size());
}

PairCounts pair_counts(const LabelCodes& labels, const Partition& partition) {
    require_same_length(labels, partition);
    PairCounts pc;
    const std::int64_t n = labels.size();
    pc.total = choose2(n);
    for (auto s : contingency(labels, partition)) pc.same_both += choose2(s);
    for (int s : partition.community_sizes()) pc.same_community += choose2(s);
    for (auto s : label_sizes(labels)) pc.same_label += choose2(s);
    return pc;
}

RandNull rand_null(const LabelCodes& labels, const Partition& partition) {
    const PairCounts pc = pair_counts(labels, partition);
    const long double n = static_cast<long double>(labels.size());
    const long double m = static_cast<long double>(pc.total);
    const long double m1 = static_cast<long double>(pc.same_community);
    const long double m2 = static_cast<long double>(pc.same_label);

    RandNull out;
    if (m < 1.0L) return out;
    const long double mean = m1 * m2 / m;

    // E[w^2] summed over ordered pairs of item pairs: identical, sharing one
    // item, disjoint.
    const long double a1 = falling3_sum(partition.community_sizes());
    const long double b1 = falling3_sum(label_sizes(labels));
    const long double t1 = n * (n - 1.0L) * (n - 2.0L);
    const long double a2 = m1 * (m1 - 1.0L) - a1;
    const long double b2 = m2 * (m2 - 1.0L) - b1;
    const long double t2 = m * (m - 1.0L) - t1;
    long double second = mean;
    if (t1 > 0.0L) second += a1 * b1 / t1;
    if (t2 > 0.0L) second += a2 * b2 / t2;

    out.mean = static_cast<double>(mean);
    out.variance = static_cast<double>(std::max(0.0L, second - mean * mean));
    return out;
}

double z_rand(const LabelCodes& labels, const Partition& partition) {
    const PairCounts pc = pair_counts(labels, partition);
    if (pc.total < 1 || pc.same_community == 0 || pc.same_label == 0) {
        throw Error(ErrorCode::DegenerateCounts, "z-Rand needs same-community and same-label pairs");
    }
    const RandNull null = rand_null(labels, partition);
    // Relative floor absorbs cancellation when the variance is analytically 0.
    if (!(null.variance > 1e-12 * null.mean * null.mean)) {
        throw Error(ErrorCode::DegenerateCounts, "w has zero variance under the null");
    }
    return (static_cast<double>(pc.same_both) - null.mean) / std::sqrt(null.variance);
}

double z_rand_hypergeometric(const PairCounts& pc) {
    const double m = static_cast<double>(pc.total);
    const double m1 = static_cast<double>(pc.same_community);
    const double m2 = static_cast<double>(pc.same_label);
    if (!(m > 1.0) || !(m1 > 0.0) || !(m2 > 0.0)) {
        throw Error(ErrorCode::DegenerateCounts, "z-Rand needs same-community and same-label pairs");
    }
    const double mean = m1 * m2 / m;
    const double var = mean * (1.0 - m1 / m) * (m - m2) / (m - 1.0);
    if (!(var > 0.0)) throw Error(ErrorCode::DegenerateCounts, "w has zero variance under the null");
    return (static_cast<double>(pc.same_both) - mean) / std::sqrt(var);
}

Diagnostics diagnostics(const SocialMatrix& social, const LabelCodes& labels) {
    if (labels.size() != social.size()) {
        throw Error(ErrorCode::LengthMismatch, "labels and social matrix sizes differ");
    }
    Diagnostics d;
    d.individuals = social.size();
    d.contacts = static_cast<std::int64_t>(social.contact_count());
    for (const auto& [i, j] : social.pairs()) {
        if (labels.codes[static_cast<std::size_t>(i)] == labels.codes[static_cast<std::size_t>(j)]) ++d.intra_contacts;
    }
    if (d.contacts > 0) d.intra_fraction = static_cast<double>(d.intra_contacts) / static_cast<double>(d.contacts);
    if (d.individuals == 0) return d;

    const auto degrees = social.degrees();
    double sum = 0.0;
    for (int k : degrees) {
        sum += k;
        d.max_degree = std::max(d.max_degree, k);
        if (k == 0) ++d.isolates;
    }
    const double n = d.individuals;
    d.mean_degree = sum / n;
    double ss = 0.0;
    for (int k : degrees) ss += (k - d.mean_degree) * (k - d.mean_degree);
    d.degree_std_population = std::sqrt(ss / n);
    d.degree_std = d.individuals > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    d.isolate_fraction = d.isolates / n;
    return d;
}

std::vector<CommunitySummary> summarize_communities(const Partition& partition, const LabelCodes& labels,
                                                    std::span<const Point2> locations) {
    require_same_length(labels, partition);
    if (locations.size() != labels.codes.size()) {
        throw Error(ErrorCode::LengthMismatch, "locations and labels sizes differ");
    }
    const auto nl = static_cast<std::size_t>(labels.label_count());
    const auto table = contingency(labels, partition);
    std::vector<CommunitySummary> out(static_cast<std::size_t>(partition.community_count));
    for (std::size_t i = 0; i < locations.size(); ++i) {
        auto& s = out[static_cast<std::size_t>(partition.assignment[i])];
        ++s.size;
        s.centroid.x += locations[i].x;
        s.centroid.y += locations[i].y;
    }
    for (int c = 0; c < partition.community_count; ++c) {
        auto& s = out[static_cast<std::size_t>(c)];
        s.id = c;
        if (s.size > 0) {
            s.centroid.x /= s.size;
            s.centroid.y /= s.size;
        }
        std::vector<std::pair<std::int64_t, int>> counts;
        for (std::size_t l = 0; l < nl; ++l) {
            const auto v = table[static_cast<std::size_t>(c) * nl + l];
            if (v > 0) counts.emplace_back(v, static_cast<int>(l));
        }
        std::stable_sort(counts.begin(), counts.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
        for (const auto& [v, l] : counts) {
            s.composition.emplace_back(labels.names[static_cast<std::size_t>(l)],
                                       static_cast<double>(v) / static_cast<double>(s.size));
        }
        if (!counts.empty()) s.plurality_label = labels.names[static_cast<std::size_t>(counts.front().second)];
    }
    return out;
}

}  // namespace geocluster
