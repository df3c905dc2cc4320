#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace lrswap {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Ordered list of named pass/fail checks.
struct VerificationReport {
  std::vector<CheckResult> checks;

  void add(std::string name, bool passed, std::string detail = {}) {
    checks.push_back({std::move(name), passed, std::move(detail)});
  }
  void append(const VerificationReport& other, const std::string& prefix = {});
  bool all_passed() const;
  nlohmann::ordered_json to_json() const;
};

}  // namespace lrswap
