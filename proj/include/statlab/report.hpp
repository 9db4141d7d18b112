#pragma once

// Verification reports: named checks with their measured value, tolerance
// and verdict, serialized to JSON with a fixed key schema.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace statlab {

inline constexpr const char* kToolName = "statlab";
inline constexpr const char* kToolVersion = "0.1.0";

struct Check {
  std::string name;
  double value = 0.0;        // residual, min slack, or other measured value
  double tolerance = 0.0;    // threshold the value is compared against
  std::string comparison;    // "<=" or ">="
  std::size_t samples = 0;
  std::size_t violations = 0;
  bool passed = true;
  bool informational = false;  // reported, never fails the run
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
};

class VerificationReport {
 public:
  VerificationReport() = default;
  VerificationReport(std::string command, std::uint64_t seed, double tol_residual, double tol_slack);

  std::string command;
  std::uint64_t seed = 0;
  double tol_residual = 1e-8;
  double tol_slack = 1e-9;
  std::vector<Check> checks;
  nlohmann::ordered_json data = nlohmann::ordered_json::object();
  std::string verdict;
  double seconds = 0.0;

  /// value <= tolerance
  Check& expect_at_most(const std::string& name, double value, double tolerance, std::size_t samples = 1);
  /// value >= threshold
  Check& expect_at_least(const std::string& name, double value, double threshold, std::size_t samples = 1);
  /// violations == 0; value carries a summary statistic (min slack etc).
  Check& expect_no_violations(const std::string& name, std::size_t violations, std::size_t samples,
                              double value, double tolerance);
  Check& note(const std::string& name, double value);

  /// All non-informational checks passed.
  bool passed() const noexcept;

  /// Fills `verdict` with "pass"/"fail" unless already set.
  void finalize();

  nlohmann::ordered_json to_json(bool include_timing = true) const;
  std::string to_table() const;
};

}  // namespace statlab
