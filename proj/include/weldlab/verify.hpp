#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace weldlab {

struct CaseResult {
  std::string name;
  int criterion = 0;  // acceptance criterion number this case covers
  double value = 0;   // measured residual
  double tolerance = 0;
  bool pass = false;
  double seconds = 0;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<CaseResult> cases;
  bool pass() const;
};

const std::vector<std::string>& suite_names();  // excluding "all"
// Throws ConfigError for an unknown name. "all" runs every suite.
SuiteReport verify_suite(const std::string& name);

// timings are left out so repeated runs serialize identically
nlohmann::json to_json(const SuiteReport& r);
std::string console_table(const SuiteReport& r);

}  // namespace weldlab
