#include "lrswap/report.hpp"

#include <algorithm>

namespace lrswap {

void VerificationReport::append(const VerificationReport& other, const std::string& prefix) {
  for (const auto& c : other.checks) checks.push_back({prefix + c.name, c.passed, c.detail});
}

bool VerificationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

nlohmann::ordered_json VerificationReport::to_json() const {
  nlohmann::ordered_json out;
  out["passed"] = all_passed();
  out["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json item;
    item["name"] = c.name;
    item["passed"] = c.passed;
    if (!c.detail.empty()) item["detail"] = c.detail;
    out["checks"].push_back(std::move(item));
  }
  return out;
}

}  // namespace lrswap
