#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geocluster/graph.hpp"
#include "geocluster/metrics.hpp"

namespace geocluster {

struct Stat {
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation; 0 for a single value

    friend bool operator==(const Stat&, const Stat&) = default;
};

Stat summarize(const std::vector<double>& values);

struct RunResult {
    std::uint64_t seed = 0;
    int communities = 0;
    double purity = 0.0;
    double z_rand = 0.0;  // 0 when no pair is co-clustered or every pair is
    double objective = 0.0;
    std::vector<int> assignment;

    friend bool operator==(const RunResult&, const RunResult&) = default;
};

// One grid point of an experiment.
struct Record {
    std::string method;
    std::map<std::string, double> params;
    std::vector<RunResult> runs;
    Stat purity;
    Stat z_rand;
    Stat communities;
    std::vector<CommunitySummary> summary;  // communities of the first run

    friend bool operator==(const Record&, const Record&) = default;
};

struct Plateau {
    int first = 0;  // slice indices, inclusive
    int last = 0;
    int communities = 0;

    friend bool operator==(const Plateau&, const Plateau&) = default;
};

struct Analysis {
    std::vector<Plateau> plateaus;
    std::vector<int> z_rand_maxima;
    std::vector<int> plateaus_near_maxima;  // indices into plateaus
    std::optional<double> equivalence_p;
    std::optional<std::int64_t> observed_intra_contacts;
    std::optional<std::int64_t> intra_pairs;

    friend bool operator==(const Analysis&, const Analysis&) = default;
};

struct ReportConfig {
    std::string dataset;
    int k = 31;
    int runs = 10;
    std::uint64_t seed = 1;
    std::vector<std::uint64_t> seeds;
    double sigma = 0.0;
    std::vector<double> alphas;
    std::vector<double> gammas;
    std::optional<double> omega;
    std::vector<double> p_grid;
    std::vector<double> q_list;

    friend bool operator==(const ReportConfig&, const ReportConfig&) = default;
};

struct RunReport {
    std::string command;
    ReportConfig config;
    std::optional<Diagnostics> diagnostics;
    std::vector<Record> results;
    Analysis analysis;

    friend bool operator==(const RunReport&, const RunReport&) = default;
};

struct ExperimentOptions {
    int k = 31;
    int runs = 10;
    std::uint64_t seed = 1;
    int threads = 0;  // 0: hardware concurrency capped by GEOCLUSTER_THREADS
    std::string dataset_name;
};

// Worker count from the request, hardware and GEOCLUSTER_THREADS.
int resolve_threads(int requested);

// Spectral clustering at one alpha, repeated with seeds seed, seed + 1, ...
RunReport run_spectral(const Dataset& data, double alpha, const ExperimentOptions& options);

RunReport sweep_alpha(const Dataset& data, const std::vector<double>& alphas, const ExperimentOptions& options);

// Multislice Louvain over the gamma grid on the symmetrised D^-1 W. One record
// per slice; runs repeat the optimisation with derived seeds.
RunReport run_multislice(const Dataset& data, double alpha, const std::vector<double>& gammas, double omega,
                         const ExperimentOptions& options);

// Spectral clustering with the contacts replaced by GT(p, q). Run r draws its
// matrix from a seed fixed by (seed + r, index of p), shared across q and alpha.
RunReport gt_sweep(const Dataset& data, const std::vector<double>& alphas, const std::vector<double>& p_grid,
                   const std::vector<double>& q_list, const ExperimentOptions& options);

// GMM on locations, k-means on columns of D^-1 W and spectral clustering.
RunReport run_baselines(const Dataset& data, const std::vector<double>& alphas, const ExperimentOptions& options);

// Maximal runs of equal values of length >= min_length.
std::vector<Plateau> find_plateaus(const std::vector<int>& counts, int min_length = 3);

// Indices whose value is >= both neighbours and > at least one.
std::vector<int> local_maxima(const std::vector<double>& values);

// Scores a partition against labels; z is 0 where it is undefined.
RunResult score_partition(const LabelCodes& labels, const Partition& partition, std::uint64_t seed);

}  // namespace geocluster
