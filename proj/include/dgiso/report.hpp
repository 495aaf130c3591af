#pragma once

#include <chrono>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace dgiso {

/// Outcome of one numerical check: what was checked, with which parameters and
/// tolerances, whether it held, and the values that justify the verdict.
struct VerificationReport {
  std::string id;
  std::map<std::string, double> parameters;
  bool passed = true;
  nlohmann::json witnesses = nlohmann::json::object();
  std::map<std::string, double> tolerances;
  std::vector<std::string> failures;
  double wall_time_s = 0.0;

  /// Records a named condition; a false condition fails the report.
  void require(bool ok, std::string what) {
    if (!ok) {
      passed = false;
      failures.push_back(std::move(what));
    }
  }
};

/// `with_timing = false` drops the measured wall time so that repeated runs
/// serialise to identical bytes.
inline nlohmann::json to_json(const VerificationReport& r, bool with_timing = true) {
  nlohmann::json j;
  j["id"] = r.id;
  j["parameters"] = r.parameters;
  j["passed"] = r.passed;
  j["witnesses"] = r.witnesses;
  j["tolerances"] = r.tolerances;
  j["failures"] = r.failures;
  j["wall_time_s"] = with_timing ? nlohmann::json(r.wall_time_s) : nlohmann::json(nullptr);
  return j;
}

/// Stamps elapsed wall time into a report when it goes out of scope.
class ReportTimer {
 public:
  explicit ReportTimer(VerificationReport& r) : report_(r), start_(std::chrono::steady_clock::now()) {}
  ~ReportTimer() {
    report_.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
  ReportTimer(const ReportTimer&) = delete;
  ReportTimer& operator=(const ReportTimer&) = delete;

 private:
  VerificationReport& report_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace dgiso
