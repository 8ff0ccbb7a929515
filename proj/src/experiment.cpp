#include "fioh/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "fioh/acceptance.hpp"

namespace fioh {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::vector<std::string> known_suites() {
  std::vector<std::string> all;
  for (int k = 1; k <= acceptance::criterion_count(); ++k)
    all.push_back(acceptance::criterion_name(k));
  return all;
}

std::vector<std::string> ExperimentConfig::validate() const {
  std::vector<std::string> problems;
  try {
    grid.validate();
  } catch (const std::exception& e) {
    problems.emplace_back(e.what());
  }
  if (octaves < 1) problems.emplace_back("ladder: octaves must be >= 1");
  if (per_octave < 1) problems.emplace_back("ladder: nodes per octave must be >= 1");
  if (directions < 4) problems.emplace_back("directions: need at least 4");
  if (threads < 0) problems.emplace_back("threads must be >= 0");
  std::vector<std::string> all = known_suites();
  for (const std::string& s : suites)
    if (std::find(all.begin(), all.end(), s) == all.end())
      problems.push_back("unknown suite: " + s);
  return problems;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    if (g.contains("n")) cfg.grid.n = g["n"].get<int>();
    if (g.contains("points")) cfg.grid.points = g["points"].get<int>();
    if (g.contains("length")) cfg.grid.length = g["length"].get<double>();
  }
  if (j.contains("ladder")) {
    const auto& l = j["ladder"];
    if (l.contains("octaves")) cfg.octaves = l["octaves"].get<int>();
    if (l.contains("per_octave")) cfg.per_octave = l["per_octave"].get<int>();
  }
  if (j.contains("directions")) cfg.directions = j["directions"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("suites"))
    cfg.suites = j["suites"].get<std::vector<std::string>>();
  if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
  if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
  return cfg;
}

nlohmann::ordered_json ExperimentConfig::to_json() const {
  nlohmann::ordered_json j;
  j["grid"]["n"] = grid.n;
  j["grid"]["points"] = grid.points;
  j["grid"]["length"] = grid.length;
  j["ladder"]["octaves"] = octaves;
  j["ladder"]["per_octave"] = per_octave;
  j["directions"] = directions;
  j["seed"] = seed;
  j["suites"] = suites;
  j["output_dir"] = output_dir;
  j["threads"] = threads;
  return j;
}

void ReportBundle::add_record(const std::string& suite,
                              nlohmann::ordered_json record) {
  tables[suite].push_back(std::move(record));
}

void ReportBundle::add_verdict(const std::string& suite, bool pass) {
  verdicts.emplace_back(suite, pass);
}

bool ReportBundle::all_passed() const {
  for (const auto& [suite, pass] : verdicts)
    if (!pass) return false;
  return true;
}

ReportBundle run(const ExperimentConfig& config) {
  std::vector<std::string> problems = config.validate();
  if (!problems.empty()) {
    std::string msg = "invalid configuration:";
    for (const std::string& p : problems) msg += "\n  - " + p;
    throw InvalidInput(msg);
  }
  if (config.threads > 0) set_thread_count(config.threads);

  ReportBundle bundle;
  bundle.config_echo = config.to_json();

  std::vector<std::string> all = known_suites();
  for (const std::string& suite : config.suites) {
    int id = 1 + static_cast<int>(std::find(all.begin(), all.end(), suite) -
                                  all.begin());
    acceptance::CriterionResult res = acceptance::run_criterion(id, std::cout);
    for (auto& rec : res.records) bundle.add_record(suite, std::move(rec));
    bundle.add_verdict(suite, res.pass);
  }
  return bundle;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string json_scalar_to_string(const nlohmann::ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_float()) return format_number(v.get<double>());
  return v.dump();
}

void emit_table_csv(const std::string& path,
                    const std::vector<nlohmann::ordered_json>& records) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("emit: cannot open " + path);
  // Stable column order: keys in first-appearance order across records.
  std::vector<std::string> columns;
  for (const auto& rec : records)
    for (auto it = rec.begin(); it != rec.end(); ++it)
      if (std::find(columns.begin(), columns.end(), it.key()) == columns.end())
        columns.push_back(it.key());
  for (std::size_t c = 0; c < columns.size(); ++c)
    os << (c ? "," : "") << csv_escape(columns[c]);
  os << "\n";
  for (const auto& rec : records) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      os << (c ? "," : "");
      if (rec.contains(columns[c]))
        os << csv_escape(json_scalar_to_string(rec.at(columns[c])));
    }
    os << "\n";
  }
  if (!os) throw std::runtime_error("emit: write failed for " + path);
}

void emit_table_jsonl(const std::string& path,
                      const std::vector<nlohmann::ordered_json>& records) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("emit: cannot open " + path);
  for (const auto& rec : records) os << rec.dump() << "\n";
  if (!os) throw std::runtime_error("emit: write failed for " + path);
}

}  // namespace

void emit(const ReportBundle& bundle, const std::string& directory,
          const std::string& format) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec)
    throw std::runtime_error("emit: cannot create directory " + directory +
                             ": " + ec.message());
  bool csv = format == "csv";
  if (!csv && format != "json-lines")
    throw InvalidInput("emit: format must be csv or json-lines");

  {
    std::string path = directory + "/config.json";
    std::ofstream os(path);
    if (!os) throw std::runtime_error("emit: cannot open " + path);
    os << bundle.config_echo.dump(2) << "\n";
  }
  for (const auto& [suite, records] : bundle.tables) {
    std::string path = directory + "/" + suite + (csv ? ".csv" : ".jsonl");
    if (csv)
      emit_table_csv(path, records);
    else
      emit_table_jsonl(path, records);
  }
  {
    std::vector<nlohmann::ordered_json> rows;
    for (const auto& [suite, pass] : bundle.verdicts) {
      nlohmann::ordered_json row;
      row["suite"] = suite;
      row["verdict"] = pass ? "pass" : "fail";
      rows.push_back(row);
    }
    std::string path = directory + std::string("/verdicts") +
                       (csv ? ".csv" : ".jsonl");
    if (csv)
      emit_table_csv(path, rows);
    else
      emit_table_jsonl(path, rows);
  }
}

}  // namespace fioh
