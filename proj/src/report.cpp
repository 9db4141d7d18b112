#include "statlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace statlab {

namespace {

// NaN or infinity cannot be represented in JSON; they become null there and
// always fail a comparison.
bool compare(double value, const std::string& op, double tol) {
  if (!std::isfinite(value)) return false;
  return op == "<=" ? value <= tol : value >= tol;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

VerificationReport::VerificationReport(std::string cmd, std::uint64_t s, double tr, double ts)
    : command(std::move(cmd)), seed(s), tol_residual(tr), tol_slack(ts) {}

Check& VerificationReport::expect_at_most(const std::string& name, double value, double tolerance,
                                          std::size_t samples) {
  Check c;
  c.name = name;
  c.value = value;
  c.tolerance = tolerance;
  c.comparison = "<=";
  c.samples = samples;
  c.passed = compare(value, "<=", tolerance);
  c.violations = c.passed ? 0 : 1;
  checks.push_back(std::move(c));
  return checks.back();
}

Check& VerificationReport::expect_at_least(const std::string& name, double value, double threshold,
                                           std::size_t samples) {
  Check c;
  c.name = name;
  c.value = value;
  c.tolerance = threshold;
  c.comparison = ">=";
  c.samples = samples;
  c.passed = compare(value, ">=", threshold);
  c.violations = c.passed ? 0 : 1;
  checks.push_back(std::move(c));
  return checks.back();
}

Check& VerificationReport::expect_no_violations(const std::string& name, std::size_t violations,
                                                std::size_t samples, double value, double tolerance) {
  Check c;
  c.name = name;
  c.value = value;
  c.tolerance = tolerance;
  c.comparison = ">=";
  c.samples = samples;
  c.violations = violations;
  c.passed = violations == 0 && std::isfinite(value);
  checks.push_back(std::move(c));
  return checks.back();
}

Check& VerificationReport::note(const std::string& name, double value) {
  Check c;
  c.name = name;
  c.value = value;
  c.informational = true;
  checks.push_back(std::move(c));
  return checks.back();
}

bool VerificationReport::passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.informational || c.passed; });
}

void VerificationReport::finalize() {
  if (verdict.empty()) verdict = passed() ? "pass" : "fail";
}

nlohmann::ordered_json VerificationReport::to_json(bool include_timing) const {
  using nlohmann::ordered_json;
  ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = command;
  j["seed"] = seed;
  j["tolerances"] = {{"residual", tol_residual}, {"slack", tol_slack}};
  ordered_json arr = ordered_json::array();
  for (const auto& c : checks) {
    ordered_json e;
    e["name"] = c.name;
    e["value"] = std::isfinite(c.value) ? ordered_json(c.value) : ordered_json(nullptr);
    if (c.informational) {
      e["tolerance"] = nullptr;
      e["comparison"] = nullptr;
    } else {
      e["tolerance"] = c.tolerance;
      e["comparison"] = c.comparison;
    }
    e["samples"] = c.samples;
    e["violations"] = c.violations;
    e["passed"] = c.informational ? true : c.passed;
    e["informational"] = c.informational;
    e["details"] = c.details;
    arr.push_back(std::move(e));
  }
  j["checks"] = std::move(arr);
  j["data"] = data;
  j["passed"] = passed();
  j["verdict"] = verdict.empty() ? (passed() ? "pass" : "fail") : verdict;
  if (include_timing) j["timing"] = {{"seconds", seconds}};
  return j;
}

std::string VerificationReport::to_table() const {
  std::size_t width = 5;
  for (const auto& c : checks) width = std::max(width, c.name.size());
  std::ostringstream os;
  os << kToolName << ' ' << kToolVersion << "  " << command << "  seed " << seed << '\n';
  os << std::string(width, '-') << "  ------------  --  ------------  ---------  ------\n";
  for (const auto& c : checks) {
    os << c.name << std::string(width - c.name.size(), ' ') << "  ";
    const std::string v = format_number(c.value);
    os << v << std::string(v.size() < 12 ? 12 - v.size() : 0, ' ') << "  ";
    if (c.informational) {
      os << "  " << "  " << std::string(12, ' ') << "  " << std::string(9, ' ') << "  info";
    } else {
      const std::string t = format_number(c.tolerance);
      os << c.comparison << "  " << t << std::string(t.size() < 12 ? 12 - t.size() : 0, ' ') << "  ";
      const std::string vs = std::to_string(c.violations) + "/" + std::to_string(c.samples);
      os << vs << std::string(vs.size() < 9 ? 9 - vs.size() : 0, ' ') << "  " << (c.passed ? "ok" : "FAIL");
    }
    os << '\n';
  }
  os << "verdict: " << (verdict.empty() ? (passed() ? "pass" : "fail") : verdict) << '\n';
  return os.str();
}

}  // namespace statlab
