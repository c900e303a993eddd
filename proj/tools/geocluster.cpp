#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geocluster/error.hpp"
#include "geocluster/experiments.hpp"
#include "geocluster/io.hpp"
#include "geocluster/synth.hpp"

namespace fs = std::filesystem;
using namespace geocluster;

namespace {

enum Exit { kOk = 0, kUsage = 2, kData = 3, kNumerical = 4 };

int exit_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument:
        case ErrorCode::InvalidAlpha:
        case ErrorCode::InvalidSigma:
            return kUsage;
        case ErrorCode::ZeroStrength:
        case ErrorCode::ConvergenceFailure:
        case ErrorCode::DegenerateInput:
        case ErrorCode::EmptyGraph:
        case ErrorCode::DegenerateCounts:
        case ErrorCode::CalibrationFailure:
            return kNumerical;
        default:
            return kData;
    }
}

// "a,b,c" or "start:step:stop" (inclusive).
std::vector<double> parse_grid(const std::string& text, const std::string& flag) {
    auto bad = [&] { throw Error(ErrorCode::InvalidArgument, flag + ": cannot parse '" + text + "'"); };
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            bad();
        }
        if (used != s.size() || !std::isfinite(v)) bad();
        return v;
    };
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        std::vector<double> parts;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(number(item));
        if (parts.size() != 3 || !(parts[1] > 0.0) || parts[2] < parts[0]) bad();
        const auto steps = static_cast<long>(std::floor((parts[2] - parts[0]) / parts[1] + 1e-9));
        for (long i = 0; i <= steps; ++i) {
            out.push_back(std::round((parts[0] + static_cast<double>(i) * parts[1]) * 1e10) / 1e10);
        }
    } else {
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(number(item));
    }
    if (out.empty()) bad();
    return out;
}

Dataset load_from(const std::string& dir) {
    const fs::path root(dir);
    return load_dataset(root / "individuals.csv", root / "contacts.csv");
}

void print_table(const RunReport& report) {
    std::printf("%-16s %-28s %16s %18s %14s\n", "method", "params", "purity", "z_rand", "communities");
    for (const auto& r : report.results) {
        std::string params;
        for (const auto& [k, v] : r.params) params += (params.empty() ? "" : " ") + k + "=" + format_double(v);
        std::printf("%-16s %-28s %7.4f +- %6.4f %8.2f +- %6.2f %6.1f +- %5.1f\n", r.method.c_str(), params.c_str(),
                    r.purity.mean, r.purity.std, r.z_rand.mean, r.z_rand.std, r.communities.mean, r.communities.std);
    }
    const auto& a = report.analysis;
    for (const auto& p : a.plateaus) {
        std::printf("plateau: slices %d-%d, %d communities\n", p.first, p.last, p.communities);
    }
    if (!a.plateaus.empty()) std::printf("plateaus near a z-Rand maximum: %zu\n", a.plateaus_near_maxima.size());
    if (a.equivalence_p) std::printf("equivalence p: %.4f\n", *a.equivalence_p);
}

void emit(const RunReport& report, const std::string& out) {
    if (out.empty()) {
        std::cout << report_to_json(report);
        return;
    }
    const fs::path json(out);
    save_report(report, json);
    fs::path csv = json;
    csv.replace_extension(".csv");
    write_file(csv, report_long_csv(report));
    print_table(report);
}

void print_diagnostics(const Diagnostics& d) {
    std::printf("individuals       %d\n", d.individuals);
    std::printf("contacts          %lld\n", static_cast<long long>(d.contacts));
    std::printf("mean degree       %.4f +- %.4f\n", d.mean_degree, d.degree_std);
    std::printf("max degree        %d\n", d.max_degree);
    std::printf("isolates          %d (%.3f)\n", d.isolates, d.isolate_fraction);
    std::printf("intra contacts    %lld (%.3f)\n", static_cast<long long>(d.intra_contacts), d.intra_fraction);
}

void print_config(const SynthConfig& c) {
    std::fprintf(stderr,
                 "config: members=%d groups=%d spread=%g spacing_factor=%g intra=%g degree=%g isolates=%g "
                 "activity_sd=%g contact_scale=%g seed=%llu\n",
                 c.members, c.groups, c.spatial_spread, c.spacing_factor, c.target_intra_fraction,
                 c.target_mean_degree, c.target_isolate_fraction, c.activity_sd, c.contact_scale,
                 static_cast<unsigned long long>(c.seed));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Geosocial community detection experiments"};
    app.require_subcommand(1);

    std::string dataset;
    std::string out;
    std::string preset = "hollenbeck";
    std::string alphas_text;
    std::string gamma_text = "0.1:0.1:5.0";
    std::string p_text = "0:0.1:1";
    std::string q_text = "0,0.15,0.3";
    double alpha = 0.4;
    double omega = 1.0;
    ExperimentOptions opts;
    int threads = 0;

    auto common = [&](CLI::App* cmd, bool with_runs) {
        cmd->add_option("--dataset", dataset, "Directory with individuals.csv and contacts.csv")->required();
        cmd->add_option("--k", opts.k, "Number of clusters")->capture_default_str();
        if (with_runs) cmd->add_option("--runs", opts.runs, "Runs per grid point")->capture_default_str();
        cmd->add_option("--seed", opts.seed, "Base seed; run r uses seed + r")->capture_default_str();
        cmd->add_option("--out", out, "Report JSON path (long CSV written alongside)");
        cmd->add_option("--threads", threads, "Worker threads (0: all, capped by GEOCLUSTER_THREADS)");
    };

    auto* gen = app.add_subcommand("generate", "Generate a calibrated synthetic dataset");
    gen->add_option("--preset", preset, "Generator preset")->check(CLI::IsMember({"hollenbeck"}))->capture_default_str();
    std::uint64_t gen_seed = 7;
    gen->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
    gen->add_option("--out", out, "Output directory (must exist)")->required();

    auto* spectral = app.add_subcommand("spectral", "Spectral clustering at one alpha");
    common(spectral, true);
    spectral->add_option("--alpha", alpha, "Social weight in [0, 1]")->capture_default_str();

    auto* sweep = app.add_subcommand("sweep-alpha", "Spectral clustering over a grid of alpha");
    common(sweep, true);
    alphas_text = "0:0.2:1";
    sweep->add_option("--alphas", alphas_text, "Alpha grid")->capture_default_str();

    auto* multi = app.add_subcommand("multislice", "Multislice modularity over a gamma grid");
    common(multi, true);
    multi->add_option("--alpha", alpha, "Social weight in [0, 1]")->capture_default_str();
    multi->add_option("--gamma-grid", gamma_text, "Resolution grid")->capture_default_str();
    multi->add_option("--omega", omega, "Interslice coupling")->capture_default_str();

    auto* gt = app.add_subcommand("gt-sweep", "Spectral clustering with GT(p, q) contacts");
    common(gt, true);
    std::string gt_alphas = "0.8";
    gt->add_option("--alphas", gt_alphas, "Alpha grid")->capture_default_str();
    gt->add_option("--p-grid", p_text, "Grid of p")->capture_default_str();
    gt->add_option("--q-list", q_text, "List of q")->capture_default_str();

    auto* base = app.add_subcommand("baselines", "GMM and column k-means next to spectral clustering");
    common(base, true);
    std::string base_alphas = "0,0.4,0.9";
    base->add_option("--alphas", base_alphas, "Alpha grid")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    opts.threads = threads;
    opts.dataset_name = dataset;
    if (multi->parsed() && multi->count("--runs") == 0) opts.runs = 1;

    try {
        if (gen->parsed()) {
            SynthConfig config = hollenbeck_preset();
            config.seed = gen_seed;
            if (!fs::is_directory(out)) {
                throw Error(ErrorCode::IoError, "output directory '" + out + "' does not exist");
            }
            SynthResult result;
            try {
                result = generate_dataset(config);
            } catch (const Error& e) {
                if (e.code() == ErrorCode::CalibrationFailure) print_config(config);
                throw;
            }
            save_dataset(result.dataset, fs::path(out) / "individuals.csv", fs::path(out) / "contacts.csv");
            print_diagnostics(result.diagnostics);
            std::printf("calibration iterations %d\n", result.calibration_iterations);
            return kOk;
        }

        const Dataset data = load_from(dataset);
        RunReport report;
        if (spectral->parsed()) {
            report = run_spectral(data, alpha, opts);
        } else if (sweep->parsed()) {
            report = sweep_alpha(data, parse_grid(alphas_text, "--alphas"), opts);
        } else if (multi->parsed()) {
            report = run_multislice(data, alpha, parse_grid(gamma_text, "--gamma-grid"), omega, opts);
        } else if (gt->parsed()) {
            report = gt_sweep(data, parse_grid(gt_alphas, "--alphas"), parse_grid(p_text, "--p-grid"),
                              parse_grid(q_text, "--q-list"), opts);
        } else {
            report = run_baselines(data, parse_grid(base_alphas, "--alphas"), opts);
        }
        emit(report, out);
        return kOk;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kData;
    }
}
