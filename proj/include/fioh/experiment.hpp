#pragma once

// Experiment runner: configuration, suite execution in a deterministic
// order, and report emission (CSV or JSON lines). Suites are individually
// addressable; the acceptance suites carry their pinned configurations and
// echo them into every record.

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "fioh/grid.hpp"

namespace fioh {

struct ExperimentConfig {
  SpatialGrid grid;
  int octaves = 5;
  int per_octave = 4;
  int directions = 64;
  std::uint64_t seed = 1;
  std::vector<std::string> suites;
  std::string output_dir = ".";
  int threads = 0;  // 0 keeps the default

  // Collects every problem instead of stopping at the first.
  std::vector<std::string> validate() const;

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::ordered_json to_json() const;
};

struct ReportBundle {
  nlohmann::ordered_json config_echo;
  std::map<std::string, std::vector<nlohmann::ordered_json>> tables;
  std::vector<std::pair<std::string, bool>> verdicts;

  void add_record(const std::string& suite, nlohmann::ordered_json record);
  void add_verdict(const std::string& suite, bool pass);
  bool all_passed() const;
};

// Known suite names, in execution order.
std::vector<std::string> known_suites();

ReportBundle run(const ExperimentConfig& config);

// format: "csv" or "json-lines". One table per suite plus a `verdicts`
// table; numbers carry 12 significant digits.
void emit(const ReportBundle& bundle, const std::string& directory,
          const std::string& format);

// 12-significant-digit numeric formatting used in all reports.
std::string format_number(double v);

}  // namespace fioh
