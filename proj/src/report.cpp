#include "hclab/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hclab {

Json CheckReport::to_json(bool with_timing) const {
  Json j;
  j["id"] = id;
  j["lhs"] = lhs;
  j["rhs"] = rhs;
  j["margin"] = margin;
  j["tolerance"] = tolerance;
  j["pass"] = pass;
  j["witness"] = witness;
  j["details"] = details;
  if (with_timing) j["runtime_ms"] = runtime_ms;
  return j;
}

CheckReport le_report(std::string id, double lhs, double rhs, double tol) {
  CheckReport r;
  r.id = std::move(id);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.tolerance = tol;
  r.pass = r.margin >= -tol;
  return r;
}

CheckReport eq_report(std::string id, double lhs, double rhs, double tol) {
  CheckReport r;
  r.id = std::move(id);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = -std::fabs(lhs - rhs);
  r.tolerance = tol;
  r.pass = r.margin >= -tol;
  return r;
}

bool CheckAccumulator::record(double lhs, double rhs, double margin, bool ok,
                              const std::string& witness) {
  ++count_;
  if (!ok) {
    ++failures_;
    if (first_failure_.empty()) first_failure_ = witness.empty() ? "instance " + std::to_string(count_) : witness;
  }
  if (!have_ || margin < margin_) {
    have_ = true;
    lhs_ = lhs;
    rhs_ = rhs;
    margin_ = margin;
    witness_ = witness;
  }
  return ok;
}

bool CheckAccumulator::add_le(double lhs, double rhs, const std::string& witness) {
  double m = rhs - lhs;
  return record(lhs, rhs, m, m >= -tol_, witness);
}

bool CheckAccumulator::add_eq(double lhs, double rhs, const std::string& witness) {
  double m = -std::fabs(lhs - rhs);
  return record(lhs, rhs, m, m >= -tol_, witness);
}

bool CheckAccumulator::add_exact(bool ok, double lhs, double rhs, const std::string& witness) {
  // Keep pass <=> margin >= -tol even when the double difference rounds.
  double m = ok ? std::max(0.0, rhs - lhs)
                : std::min(rhs - lhs, std::nextafter(-tol_, -std::numeric_limits<double>::infinity()));
  return record(lhs, rhs, m, ok, witness);
}

CheckReport CheckAccumulator::finish() const {
  CheckReport r;
  r.id = id_;
  r.tolerance = tol_;
  r.lhs = lhs_;
  r.rhs = rhs_;
  r.margin = margin_;
  r.pass = failures_ == 0;
  r.witness = failures_ ? first_failure_ : witness_;
  r.details = details_;
  r.details["instances"] = count_;
  r.details["failures"] = failures_;
  return r;
}

}  // namespace hclab
