#include "geocluster/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "geocluster/baselines.hpp"
#include "geocluster/error.hpp"
#include "geocluster/modularity.hpp"
#include "geocluster/random.hpp"
#include "geocluster/spectral.hpp"
#include "geocluster/synth.hpp"

namespace geocluster {
namespace {

// Runs task(i) for i in [0, count). Output order is fixed by the index, so the
// worker count never changes results. The lowest-index failure is rethrown.
template <typename Task>
void parallel_for(std::size_t count, int threads, Task task) {
    const auto workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, threads)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex mutex;
    std::size_t failed_at = count;
    std::exception_ptr failure;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    task(i);
                } catch (...) {
                    std::lock_guard lock(mutex);
                    if (i < failed_at) {
                        failed_at = i;
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

std::vector<std::uint64_t> run_seeds(const ExperimentOptions& o) {
    if (o.runs < 1) throw Error(ErrorCode::InvalidArgument, "runs must be at least 1");
    std::vector<std::uint64_t> seeds;
    for (int r = 0; r < o.runs; ++r) seeds.push_back(o.seed + static_cast<std::uint64_t>(r));
    return seeds;
}

struct Context {
    const Dataset& data;
    LabelCodes labels;
    std::vector<Point2> locations;
    double sigma;
    int threads;

    explicit Context(const Dataset& d, const ExperimentOptions& o)
        : data(d),
          labels(dataset_labels(d.individuals)),
          locations(d.locations()),
          sigma(compute_sigma(locations, d.social)),
          threads(resolve_threads(o.threads)) {
        if (o.k < 1 || o.k > d.size()) {
            throw Error(ErrorCode::InvalidArgument,
                        "k = " + std::to_string(o.k) + " outside [1, " + std::to_string(d.size()) + "]");
        }
    }

    GeoSocialGraph graph(double alpha, const SocialMatrix& social) const {
        return build_weight_matrix(locations, social, alpha, sigma);
    }
};

RunReport start_report(const std::string& command, const Context& ctx, const ExperimentOptions& o) {
    RunReport r;
    r.command = command;
    r.config.dataset = o.dataset_name;
    r.config.k = o.k;
    r.config.runs = o.runs;
    r.config.seed = o.seed;
    r.config.seeds = run_seeds(o);
    r.config.sigma = ctx.sigma;
    r.diagnostics = diagnostics(ctx.data.social, ctx.labels);
    return r;
}

void finish_record(Record& rec, const Context& ctx) {
    std::vector<double> p, z, c;
    for (const auto& run : rec.runs) {
        p.push_back(run.purity);
        z.push_back(run.z_rand);
        c.push_back(run.communities);
    }
    rec.purity = summarize(p);
    rec.z_rand = summarize(z);
    rec.communities = summarize(c);
    if (!rec.runs.empty()) {
        const auto part = compact_partition(rec.runs.front().assignment);
        rec.summary = summarize_communities(part, ctx.labels, ctx.locations);
    }
}

// Runs `runs` spectral clusterings for each alpha into consecutive records.
void spectral_records(const Context& ctx, const std::vector<double>& alphas, const ExperimentOptions& o,
                      const std::string& method, std::vector<Record>& out) {
    const auto seeds = run_seeds(o);
    const std::size_t first = out.size();
    std::vector<Embedding> embeddings(alphas.size());
    parallel_for(alphas.size(), ctx.threads, [&](std::size_t a) {
        embeddings[a] = embed(ctx.graph(alphas[a], ctx.data.social), o.k);
    });
    for (double alpha : alphas) {
        Record rec;
        rec.method = method;
        rec.params = {{"alpha", alpha}};
        rec.runs.resize(seeds.size());
        out.push_back(std::move(rec));
    }
    parallel_for(alphas.size() * seeds.size(), ctx.threads, [&](std::size_t job) {
        const std::size_t a = job / seeds.size();
        const std::size_t r = job % seeds.size();
        const Partition part = kmeans(embeddings[a].coords, o.k, seeds[r]).partition;
        out[first + a].runs[r] = score_partition(ctx.labels, part, seeds[r]);
    });
    for (std::size_t a = 0; a < alphas.size(); ++a) finish_record(out[first + a], ctx);
}

void require_grid(const std::vector<double>& grid, const std::string& name) {
    if (grid.empty()) throw Error(ErrorCode::InvalidArgument, name + " grid is empty");
}

}  // namespace

Stat summarize(const std::vector<double>& values) {
    Stat s;
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return s;
}

int resolve_threads(int requested) {
    int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("GEOCLUSTER_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0) n = std::min(n, cap);
    }
    return std::max(1, n);
}

RunResult score_partition(const LabelCodes& labels, const Partition& partition, std::uint64_t seed) {
    RunResult r;
    r.seed = seed;
    r.communities = partition.community_count;
    r.purity = purity(labels, partition);
    try {
        r.z_rand = z_rand(labels, partition);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::DegenerateCounts) throw;
        r.z_rand = 0.0;
    }
    r.objective = partition.objective;
    r.assignment = partition.assignment;
    return r;
}

std::vector<Plateau> find_plateaus(const std::vector<int>& counts, int min_length) {
    std::vector<Plateau> out;
    std::size_t start = 0;
    for (std::size_t i = 1; i <= counts.size(); ++i) {
        if (i == counts.size() || counts[i] != counts[start]) {
            if (static_cast<int>(i - start) >= min_length) {
                out.push_back({static_cast<int>(start), static_cast<int>(i - 1), counts[start]});
            }
            start = i;
        }
    }
    return out;
}

std::vector<int> local_maxima(const std::vector<double>& values) {
    std::vector<int> out;
    const std::size_t n = values.size();
    for (std::size_t i = 0; i < n; ++i) {
        const bool has_left = i > 0;
        const bool has_right = i + 1 < n;
        if (!has_left && !has_right) continue;
        if (has_left && values[i] < values[i - 1]) continue;
        if (has_right && values[i] < values[i + 1]) continue;
        const bool strict = (has_left && values[i] > values[i - 1]) || (has_right && values[i] > values[i + 1]);
        if (strict) out.push_back(static_cast<int>(i));
    }
    return out;
}

RunReport run_spectral(const Dataset& data, double alpha, const ExperimentOptions& options) {
    const Context ctx(data, options);
    RunReport report = start_report("spectral", ctx, options);
    report.config.alphas = {alpha};
    spectral_records(ctx, {alpha}, options, "spectral", report.results);
    return report;
}

RunReport sweep_alpha(const Dataset& data, const std::vector<double>& alphas, const ExperimentOptions& options) {
    require_grid(alphas, "alpha");
    const Context ctx(data, options);
    RunReport report = start_report("sweep-alpha", ctx, options);
    report.config.alphas = alphas;
    spectral_records(ctx, alphas, options, "spectral", report.results);
    return report;
}

RunReport run_multislice(const Dataset& data, double alpha, const std::vector<double>& gammas, double omega,
                         const ExperimentOptions& options) {
    require_grid(gammas, "gamma");
    const Context ctx(data, options);
    RunReport report = start_report("multislice", ctx, options);
    report.config.alphas = {alpha};
    report.config.gammas = gammas;
    report.config.omega = omega;

    const auto input = std::make_shared<const Matrix>(modularity_input(ctx.graph(alpha, data.social)));
    const SliceStack stack = SliceStack::over_gammas(input, gammas, omega);
    const auto seeds = run_seeds(options);
    std::vector<MultisliceAssignment> solved(seeds.size());
    parallel_for(seeds.size(), ctx.threads, [&](std::size_t r) { solved[r] = multislice_louvain(stack, seeds[r]); });

    for (std::size_t s = 0; s < gammas.size(); ++s) {
        Record rec;
        rec.method = "multislice";
        rec.params = {{"alpha", alpha}, {"gamma", gammas[s]}, {"omega", omega}};
        for (std::size_t r = 0; r < seeds.size(); ++r) {
            Partition part = solved[r].slice_partition(static_cast<int>(s));
            part.objective = solved[r].objective;
            rec.runs.push_back(score_partition(ctx.labels, part, seeds[r]));
        }
        finish_record(rec, ctx);
        report.results.push_back(std::move(rec));
    }

    std::vector<int> counts;
    std::vector<double> z;
    for (const auto& rec : report.results) {
        counts.push_back(rec.runs.front().communities);
        z.push_back(rec.runs.front().z_rand);
    }
    auto& an = report.analysis;
    an.plateaus = find_plateaus(counts);
    an.z_rand_maxima = local_maxima(z);
    for (std::size_t i = 0; i < an.plateaus.size(); ++i) {
        const auto& p = an.plateaus[i];
        const bool near = std::any_of(an.z_rand_maxima.begin(), an.z_rand_maxima.end(),
                                      [&](int m) { return m >= p.first - 1 && m <= p.last + 1; });
        if (near) an.plateaus_near_maxima.push_back(static_cast<int>(i));
    }
    return report;
}

RunReport gt_sweep(const Dataset& data, const std::vector<double>& alphas, const std::vector<double>& p_grid,
                   const std::vector<double>& q_list, const ExperimentOptions& options) {
    require_grid(alphas, "alpha");
    require_grid(p_grid, "p");
    require_grid(q_list, "q");
    const Context ctx(data, options);
    RunReport report = start_report("gt-sweep", ctx, options);
    report.config.alphas = alphas;
    report.config.p_grid = p_grid;
    report.config.q_list = q_list;

    const auto seeds = run_seeds(options);
    for (double q : q_list) {
        for (double alpha : alphas) {
            for (double p : p_grid) {
                Record rec;
                rec.method = "spectral-gt";
                rec.params = {{"alpha", alpha}, {"p", p}, {"q", q}};
                rec.runs.resize(seeds.size());
                report.results.push_back(std::move(rec));
            }
        }
    }
    const std::size_t np = p_grid.size();
    const std::size_t na = alphas.size();
    parallel_for(report.results.size() * seeds.size(), ctx.threads, [&](std::size_t job) {
        const std::size_t rec = job / seeds.size();
        const std::size_t r = job % seeds.size();
        const std::size_t pi = rec % np;
        const double alpha = alphas[(rec / np) % na];
        const double q = q_list[rec / (np * na)];
        const SocialMatrix gt = gt_matrix(ctx.labels, GtParams{p_grid[pi], q, mix_seed(seeds[r], pi)});
        const Partition part = spectral_cluster(ctx.graph(alpha, gt), options.k, seeds[r]);
        report.results[rec].runs[r] = score_partition(ctx.labels, part, seeds[r]);
    });
    for (auto& rec : report.results) finish_record(rec, ctx);

    auto& an = report.analysis;
    an.observed_intra_contacts = report.diagnostics->intra_contacts;
    an.intra_pairs = intra_pair_count(ctx.labels);
    if (*an.intra_pairs > 0) {
        an.equivalence_p = static_cast<double>(*an.observed_intra_contacts) / static_cast<double>(*an.intra_pairs);
    }
    return report;
}

RunReport run_baselines(const Dataset& data, const std::vector<double>& alphas, const ExperimentOptions& options) {
    require_grid(alphas, "alpha");
    const Context ctx(data, options);
    RunReport report = start_report("baselines", ctx, options);
    report.config.alphas = alphas;
    const auto seeds = run_seeds(options);

    Record gmm;
    gmm.method = "gmm";
    gmm.runs.resize(seeds.size());
    parallel_for(seeds.size(), ctx.threads, [&](std::size_t r) {
        gmm.runs[r] = score_partition(ctx.labels, gmm_cluster(ctx.locations, options.k, seeds[r]), seeds[r]);
    });
    finish_record(gmm, ctx);
    report.results.push_back(std::move(gmm));

    for (double alpha : alphas) {
        const GeoSocialGraph g = ctx.graph(alpha, data.social);
        Record rec;
        rec.method = "kmeans-columns";
        rec.params = {{"alpha", alpha}};
        rec.runs.resize(seeds.size());
        parallel_for(seeds.size(), ctx.threads, [&](std::size_t r) {
            rec.runs[r] = score_partition(ctx.labels, kmeans_columns(g, options.k, seeds[r]), seeds[r]);
        });
        finish_record(rec, ctx);
        report.results.push_back(std::move(rec));
    }
    spectral_records(ctx, alphas, options, "spectral", report.results);
    return report;
}

}  // namespace geocluster
