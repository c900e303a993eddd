#pragma once

#include <filesystem>
#include <string>

#include "geocluster/experiments.hpp"
#include "geocluster/graph.hpp"

namespace geocluster {

// Individuals: header `id,x,y,gang` (gang may be empty). Contacts: header
// `id_a,id_b`. Duplicate contacts collapse; self-contacts and unknown ids are
// errors.
Dataset load_dataset(const std::filesystem::path& individuals_csv, const std::filesystem::path& contacts_csv);

void save_dataset(const Dataset& data, const std::filesystem::path& individuals_csv,
                  const std::filesystem::path& contacts_csv);

// Same parsers on in-memory text; `source` names the input in error messages.
std::vector<Individual> parse_individuals(const std::string& text, const std::string& source = "individuals");
SocialMatrix parse_contacts(const std::string& text, const std::vector<Individual>& individuals,
                            const std::string& source = "contacts");

std::string individuals_csv(const std::vector<Individual>& individuals);
std::string contacts_csv(const Dataset& data);

// Shortest decimal that reads back to the same double.
std::string format_double(double v);

std::string report_to_json(const RunReport& report);
RunReport report_from_json(const std::string& text);

void save_report(const RunReport& report, const std::filesystem::path& path);
RunReport load_report(const std::filesystem::path& path);

// Plot-ready long format: param,value,metric,mean,std. One row per record and
// metric (purity, z_rand, communities).
std::string report_long_csv(const RunReport& report);

std::string read_file(const std::filesystem::path& path);
// Fails with IoError if the parent directory does not exist.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace geocluster
