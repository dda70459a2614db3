#pragma once

#include <string>
#include <vector>

namespace aho {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Cross-check battery behind the `validate` command. Suites: "recursion",
// "thermo", "vpt", or "all".
std::vector<CheckResult> validate_suite(const std::string& suite);

}  // namespace aho
