#pragma once

#include <chrono>
#include <string>

#include "json.hpp"

namespace hclab {

using Json = nlohmann::ordered_json;

// Outcome of one inequality or identity check. For "lhs <= rhs" checks the
// margin is rhs - lhs; identity checks use -|lhs - rhs|.
struct CheckReport {
  std::string id;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  std::string witness;
  Json details = Json::object();
  double runtime_ms = 0.0;

  Json to_json(bool with_timing = false) const;
};

CheckReport le_report(std::string id, double lhs, double rhs, double tol);
CheckReport eq_report(std::string id, double lhs, double rhs, double tol);

// Folds many "lhs <= rhs" instances into one report keeping the worst margin.
class CheckAccumulator {
 public:
  CheckAccumulator(std::string id, double tol) : id_(std::move(id)), tol_(tol) {}

  // Returns whether this instance passed.
  bool add_le(double lhs, double rhs, const std::string& witness = {});
  bool add_eq(double lhs, double rhs, const std::string& witness = {});
  // Exact (already decided) sub-check, e.g. rational comparisons.
  bool add_exact(bool ok, double lhs, double rhs, const std::string& witness = {});

  std::size_t count() const { return count_; }
  std::size_t failures() const { return failures_; }
  CheckReport finish() const;
  Json& details() { return details_; }

 private:
  bool record(double lhs, double rhs, double margin, bool ok, const std::string& witness);

  std::string id_;
  double tol_;
  std::size_t count_ = 0;
  std::size_t failures_ = 0;
  bool have_ = false;
  double lhs_ = 0, rhs_ = 0, margin_ = 0;
  std::string witness_;
  std::string first_failure_;
  Json details_ = Json::object();
};

// Runs fn() and stores wall time into the returned report.
template <class Fn>
CheckReport timed(Fn&& fn) {
  auto t0 = std::chrono::steady_clock::now();
  CheckReport r = fn();
  auto t1 = std::chrono::steady_clock::now();
  r.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return r;
}

}  // namespace hclab
