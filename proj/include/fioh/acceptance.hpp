#pragma once

// The acceptance suites. Each criterion carries its pinned configuration and
// tolerances; run_criterion prints one PASS/FAIL line and returns the
// verdict together with the measured records.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace fioh::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::vector<nlohmann::ordered_json> records;
};

int criterion_count();
std::string criterion_name(int id);  // 1-based

CriterionResult run_criterion(int id, std::ostream& log);

}  // namespace fioh::acceptance
