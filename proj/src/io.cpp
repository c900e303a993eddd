#include "geocluster/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "geocluster/error.hpp"

namespace geocluster {
namespace {

using Json = nlohmann::ordered_json;

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        fields.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return fields;
}

// Lines without trailing CR; blank trailing lines dropped.
std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

[[noreturn]] void parse_error(const std::string& source, std::size_t line, const std::string& what) {
    throw Error(ErrorCode::ParseError, source + ":" + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& s, const std::string& source, std::size_t line) {
    double v = 0.0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) parse_error(source, line, "bad number '" + s + "'");
    return v;
}

Json stat_json(const Stat& s) { return Json{{"mean", s.mean}, {"std", s.std}}; }

Stat stat_from(const Json& j) { return Stat{j.at("mean").get<double>(), j.at("std").get<double>()}; }

template <typename T>
Json optional_json(const std::optional<T>& v) {
    return v ? Json(*v) : Json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const Json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<T>();
}

Json diagnostics_json(const Diagnostics& d) {
    return Json{{"individuals", d.individuals},
                {"contacts", d.contacts},
                {"mean_degree", d.mean_degree},
                {"degree_std", d.degree_std},
                {"degree_std_population", d.degree_std_population},
                {"max_degree", d.max_degree},
                {"isolates", d.isolates},
                {"isolate_fraction", d.isolate_fraction},
                {"intra_contacts", d.intra_contacts},
                {"intra_fraction", d.intra_fraction}};
}

Diagnostics diagnostics_from(const Json& j) {
    Diagnostics d;
    d.individuals = j.at("individuals").get<int>();
    d.contacts = j.at("contacts").get<std::int64_t>();
    d.mean_degree = j.at("mean_degree").get<double>();
    d.degree_std = j.at("degree_std").get<double>();
    d.degree_std_population = j.at("degree_std_population").get<double>();
    d.max_degree = j.at("max_degree").get<int>();
    d.isolates = j.at("isolates").get<int>();
    d.isolate_fraction = j.at("isolate_fraction").get<double>();
    d.intra_contacts = j.at("intra_contacts").get<std::int64_t>();
    d.intra_fraction = j.at("intra_fraction").get<double>();
    return d;
}

Json record_json(const Record& r) {
    Json params = Json::object();
    for (const auto& [k, v] : r.params) params[k] = v;
    Json runs = Json::array();
    for (const auto& run : r.runs) {
        runs.push_back(Json{{"seed", run.seed},
                            {"communities", run.communities},
                            {"purity", run.purity},
                            {"z_rand", run.z_rand},
                            {"objective", run.objective},
                            {"assignment", run.assignment}});
    }
    Json summary = Json::array();
    for (const auto& c : r.summary) {
        Json comp = Json::array();
        for (const auto& [label, f] : c.composition) comp.push_back(Json{{"label", label}, {"fraction", f}});
        summary.push_back(Json{{"id", c.id},
                               {"size", c.size},
                               {"plurality_label", c.plurality_label},
                               {"composition", comp},
                               {"centroid", Json{{"x", c.centroid.x}, {"y", c.centroid.y}}}});
    }
    return Json{{"method", r.method},
                {"params", params},
                {"purity", stat_json(r.purity)},
                {"z_rand", stat_json(r.z_rand)},
                {"communities", stat_json(r.communities)},
                {"runs", runs},
                {"summary", summary}};
}

Record record_from(const Json& j) {
    Record r;
    r.method = j.at("method").get<std::string>();
    for (const auto& [k, v] : j.at("params").items()) r.params[k] = v.get<double>();
    r.purity = stat_from(j.at("purity"));
    r.z_rand = stat_from(j.at("z_rand"));
    r.communities = stat_from(j.at("communities"));
    for (const auto& run : j.at("runs")) {
        RunResult x;
        x.seed = run.at("seed").get<std::uint64_t>();
        x.communities = run.at("communities").get<int>();
        x.purity = run.at("purity").get<double>();
        x.z_rand = run.at("z_rand").get<double>();
        x.objective = run.at("objective").get<double>();
        x.assignment = run.at("assignment").get<std::vector<int>>();
        r.runs.push_back(std::move(x));
    }
    for (const auto& c : j.at("summary")) {
        CommunitySummary s;
        s.id = c.at("id").get<int>();
        s.size = c.at("size").get<int>();
        s.plurality_label = c.at("plurality_label").get<std::string>();
        for (const auto& e : c.at("composition")) {
            s.composition.emplace_back(e.at("label").get<std::string>(), e.at("fraction").get<double>());
        }
        s.centroid = {c.at("centroid").at("x").get<double>(), c.at("centroid").at("y").get<double>()};
        r.summary.push_back(std::move(s));
    }
    return r;
}

std::string primary_param(const std::string& command) {
    if (command == "multislice") return "gamma";
    if (command == "gt-sweep") return "p";
    return "alpha";
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::vector<Individual> parse_individuals(const std::string& text, const std::string& source) {
    const auto lines = lines_of(text);
    if (lines.empty() || lines.front() != "id,x,y,gang") parse_error(source, 1, "expected header 'id,x,y,gang'");
    std::vector<Individual> out;
    std::unordered_map<std::string, std::size_t> seen;
    for (std::size_t n = 1; n < lines.size(); ++n) {
        const std::size_t line = n + 1;
        const auto f = split(lines[n]);
        if (f.size() != 4) parse_error(source, line, "expected 4 fields, got " + std::to_string(f.size()));
        if (f[0].empty()) parse_error(source, line, "empty id");
        if (!seen.emplace(f[0], out.size()).second) parse_error(source, line, "duplicate id '" + f[0] + "'");
        Individual ind;
        ind.id = f[0];
        ind.location = {parse_double(f[1], source, line), parse_double(f[2], source, line)};
        if (!f[3].empty()) ind.gang = f[3];
        out.push_back(std::move(ind));
    }
    return out;
}

SocialMatrix parse_contacts(const std::string& text, const std::vector<Individual>& individuals,
                            const std::string& source) {
    const auto lines = lines_of(text);
    if (lines.empty() || lines.front() != "id_a,id_b") parse_error(source, 1, "expected header 'id_a,id_b'");
    std::unordered_map<std::string, int> index;
    for (std::size_t i = 0; i < individuals.size(); ++i) index.emplace(individuals[i].id, static_cast<int>(i));
    std::vector<SocialMatrix::Pair> pairs;
    for (std::size_t n = 1; n < lines.size(); ++n) {
        const std::size_t line = n + 1;
        const auto f = split(lines[n]);
        if (f.size() != 2) parse_error(source, line, "expected 2 fields, got " + std::to_string(f.size()));
        int ends[2];
        for (int e = 0; e < 2; ++e) {
            auto it = index.find(f[static_cast<std::size_t>(e)]);
            if (it == index.end()) {
                throw Error(ErrorCode::UnknownId,
                            source + ":" + std::to_string(line) + ": '" + f[static_cast<std::size_t>(e)] + "'");
            }
            ends[e] = it->second;
        }
        if (ends[0] == ends[1]) {
            throw Error(ErrorCode::SelfContact, source + ":" + std::to_string(line) + ": '" + f[0] + "'");
        }
        pairs.emplace_back(ends[0], ends[1]);
    }
    return SocialMatrix::from_pairs(static_cast<int>(individuals.size()), std::move(pairs));
}

Dataset load_dataset(const std::filesystem::path& individuals_path, const std::filesystem::path& contacts_path) {
    Dataset d;
    d.individuals = parse_individuals(read_file(individuals_path), individuals_path.string());
    d.social = parse_contacts(read_file(contacts_path), d.individuals, contacts_path.string());
    return d;
}

std::string individuals_csv(const std::vector<Individual>& individuals) {
    std::string out = "id,x,y,gang\n";
    for (const auto& ind : individuals) {
        out += ind.id + "," + format_double(ind.location.x) + "," + format_double(ind.location.y) + "," +
               ind.gang.value_or("") + "\n";
    }
    return out;
}

std::string contacts_csv(const Dataset& data) {
    std::string out = "id_a,id_b\n";
    for (const auto& [i, j] : data.social.pairs()) {
        out += data.individuals[static_cast<std::size_t>(i)].id + "," +
               data.individuals[static_cast<std::size_t>(j)].id + "\n";
    }
    return out;
}

void save_dataset(const Dataset& data, const std::filesystem::path& individuals_path,
                  const std::filesystem::path& contacts_path) {
    write_file(individuals_path, individuals_csv(data.individuals));
    write_file(contacts_path, contacts_csv(data));
}

std::string report_to_json(const RunReport& report) {
    const auto& c = report.config;
    Json config{{"dataset", c.dataset}, {"k", c.k},           {"runs", c.runs},     {"seed", c.seed},
                {"seeds", c.seeds},     {"sigma", c.sigma},   {"alphas", c.alphas}, {"gammas", c.gammas},
                {"omega", optional_json(c.omega)}, {"p_grid", c.p_grid}, {"q_list", c.q_list}};
    Json results = Json::array();
    for (const auto& r : report.results) results.push_back(record_json(r));
    const auto& a = report.analysis;
    Json plateaus = Json::array();
    for (const auto& p : a.plateaus) {
        plateaus.push_back(Json{{"first", p.first}, {"last", p.last}, {"communities", p.communities}});
    }
    Json analysis{{"plateaus", plateaus},
                  {"z_rand_maxima", a.z_rand_maxima},
                  {"plateaus_near_maxima", a.plateaus_near_maxima},
                  {"equivalence_p", optional_json(a.equivalence_p)},
                  {"observed_intra_contacts", optional_json(a.observed_intra_contacts)},
                  {"intra_pairs", optional_json(a.intra_pairs)}};
    Json doc{{"command", report.command},
             {"config", config},
             {"diagnostics", report.diagnostics ? diagnostics_json(*report.diagnostics) : Json(nullptr)},
             {"results", results},
             {"analysis", analysis}};
    return doc.dump(1) + "\n";
}

RunReport report_from_json(const std::string& text) {
    RunReport r;
    try {
        const Json doc = Json::parse(text);
        r.command = doc.at("command").get<std::string>();
        const auto& c = doc.at("config");
        r.config.dataset = c.at("dataset").get<std::string>();
        r.config.k = c.at("k").get<int>();
        r.config.runs = c.at("runs").get<int>();
        r.config.seed = c.at("seed").get<std::uint64_t>();
        r.config.seeds = c.at("seeds").get<std::vector<std::uint64_t>>();
        r.config.sigma = c.at("sigma").get<double>();
        r.config.alphas = c.at("alphas").get<std::vector<double>>();
        r.config.gammas = c.at("gammas").get<std::vector<double>>();
        r.config.omega = optional_from<double>(c.at("omega"));
        r.config.p_grid = c.at("p_grid").get<std::vector<double>>();
        r.config.q_list = c.at("q_list").get<std::vector<double>>();
        if (!doc.at("diagnostics").is_null()) r.diagnostics = diagnostics_from(doc.at("diagnostics"));
        for (const auto& rec : doc.at("results")) r.results.push_back(record_from(rec));
        const auto& a = doc.at("analysis");
        for (const auto& p : a.at("plateaus")) {
            r.analysis.plateaus.push_back(
                {p.at("first").get<int>(), p.at("last").get<int>(), p.at("communities").get<int>()});
        }
        r.analysis.z_rand_maxima = a.at("z_rand_maxima").get<std::vector<int>>();
        r.analysis.plateaus_near_maxima = a.at("plateaus_near_maxima").get<std::vector<int>>();
        r.analysis.equivalence_p = optional_from<double>(a.at("equivalence_p"));
        r.analysis.observed_intra_contacts = optional_from<std::int64_t>(a.at("observed_intra_contacts"));
        r.analysis.intra_pairs = optional_from<std::int64_t>(a.at("intra_pairs"));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("report: ") + e.what());
    }
    return r;
}

void save_report(const RunReport& report, const std::filesystem::path& path) {
    write_file(path, report_to_json(report));
}

RunReport load_report(const std::filesystem::path& path) {
    return report_from_json(read_file(path));
}

std::string report_long_csv(const RunReport& report) {
    const std::string key = primary_param(report.command);
    std::string out = "param,value,metric,mean,std\n";
    for (const auto& rec : report.results) {
        std::string param = key;
        for (const auto& [k, v] : rec.params) {
            if (k != key) param += ";" + k + "=" + format_double(v);
        }
        if (report.command == "baselines") param += ";method=" + rec.method;
        const auto it = rec.params.find(key);
        const std::string value = it == rec.params.end() ? "" : format_double(it->second);
        const std::pair<const char*, const Stat*> metrics[] = {
            {"purity", &rec.purity}, {"z_rand", &rec.z_rand}, {"communities", &rec.communities}};
        for (const auto& [name, s] : metrics) {
            out += param + "," + value + "," + name + "," + format_double(s->mean) + "," + format_double(s->std) + "\n";
        }
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    const auto parent = path.parent_path();
    if (!parent.empty() && !std::filesystem::is_directory(parent)) {
        throw Error(ErrorCode::IoError, "directory '" + parent.string() + "' does not exist");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
    out << content;
    if (!out.flush()) throw Error(ErrorCode::IoError, "write to '" + path.string() + "' failed");
}

}  // namespace geocluster
