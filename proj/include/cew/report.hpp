#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cew {

enum class DecisionPath { ExactSymbolic, NumericOracle };

inline const char* to_string(DecisionPath p) {
  return p == DecisionPath::ExactSymbolic ? "exact-symbolic" : "numeric-oracle";
}

struct SubCheck {
  std::string name;
  bool passed = true;
  double max_abs_error = 0.0;
  std::string note;
};

struct VerificationReport {
  std::string check_name;
  std::string mode;
  bool passed = true;
  DecisionPath decision_path = DecisionPath::ExactSymbolic;
  double max_abs_error = 0.0;
  /// 0 for exact checks.
  double tolerance = 0.0;
  std::optional<std::string> witness;
  std::int64_t duration_ms = 0;
  std::vector<SubCheck> details;

  /// Records a sub-check and folds it into the overall status.
  void add(SubCheck check) {
    if (!check.passed) passed = false;
    if (check.max_abs_error > max_abs_error) max_abs_error = check.max_abs_error;
    details.push_back(std::move(check));
  }
  void fail(std::string why) {
    passed = false;
    if (!witness) witness = std::move(why);
  }
};

/// Stamps duration_ms on destruction.
class ReportTimer {
 public:
  explicit ReportTimer(VerificationReport& report)
      : report_(report), start_(std::chrono::steady_clock::now()) {}
  ~ReportTimer() {
    report_.duration_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - start_)
                              .count();
  }
  ReportTimer(const ReportTimer&) = delete;
  ReportTimer& operator=(const ReportTimer&) = delete;

 private:
  VerificationReport& report_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace cew
