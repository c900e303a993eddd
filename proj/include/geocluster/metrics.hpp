#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "geocluster/graph.hpp"
#include "geocluster/partition.hpp"

namespace geocluster {

// Ground-truth labels as contiguous integer codes. Codes follow the sorted
// order of the label strings, so comparing codes compares labels.
struct LabelCodes {
    std::vector<int> codes;
    std::vector<std::string> names;  // names[code], sorted

    int size() const { return static_cast<int>(codes.size()); }
    int label_count() const { return static_cast<int>(names.size()); }
};

LabelCodes encode_labels(std::span<const std::string> labels);

// Labels of every individual; throws MissingLabel if any is absent or empty.
LabelCodes dataset_labels(const std::vector<Individual>& individuals);

// Fraction of items whose label equals the plurality label of their community.
// Ties go to the smallest label.
double purity(const LabelCodes& labels, const Partition& partition);

// Pair counts over the n(n-1)/2 unordered pairs.
struct PairCounts {
    std::int64_t total = 0;           // M
    std::int64_t same_community = 0;  // M1
    std::int64_t same_label = 0;      // M2
    std::int64_t same_both = 0;       // w
};

PairCounts pair_counts(const LabelCodes& labels, const Partition& partition);

// Mean and variance of w when the partition is a uniformly random
// relabelling of the items with the same community sizes.
struct RandNull {
    double mean = 0.0;
    double variance = 0.0;
};

// Exact permutation moments; needs the block sizes because Var(w) depends on
// more than the pair totals.
RandNull rand_null(const LabelCodes& labels, const Partition& partition);

// (w - E[w]) / sd(w) under the permutation null.
double z_rand(const LabelCodes& labels, const Partition& partition);

// Same statistic with the single-draw hypergeometric variance
// (M1 M2 / M)(1 - M1/M)(M - M2)/(M - 1). Kept for comparison.
double z_rand_hypergeometric(const PairCounts& counts);

struct Diagnostics {
    int individuals = 0;
    std::int64_t contacts = 0;
    double mean_degree = 0.0;
    double degree_std = 0.0;             // sample (n - 1)
    double degree_std_population = 0.0;  // n
    int max_degree = 0;
    int isolates = 0;
    double isolate_fraction = 0.0;
    std::int64_t intra_contacts = 0;
    double intra_fraction = 0.0;  // 0 when there are no contacts

    friend bool operator==(const Diagnostics&, const Diagnostics&) = default;
};

Diagnostics diagnostics(const SocialMatrix& social, const LabelCodes& labels);

// Per-community composition for plotting.
struct CommunitySummary {
    int id = 0;
    int size = 0;
    std::string plurality_label;
    std::vector<std::pair<std::string, double>> composition;  // label, fraction; descending
    Point2 centroid;

    friend bool operator==(const CommunitySummary&, const CommunitySummary&) = default;
};

std::vector<CommunitySummary> summarize_communities(const Partition& partition, const LabelCodes& labels,
                                                    std::span<const Point2> locations);

}  // namespace geocluster
