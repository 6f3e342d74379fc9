#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace hclab {

// Outcomes are opaque 64-bit codes: configuration masks, packed tuples, or
// packed (subset, configuration) pairs.
using Outcome = std::uint64_t;
using Event = std::function<bool(Outcome)>;
using View = std::function<std::uint64_t(Outcome)>;

class FiniteDistribution {
 public:
  FiniteDistribution() = default;
  // Throws std::invalid_argument on negative mass, repeated outcomes or a
  // total that is off by more than 1e-12.
  FiniteDistribution(std::vector<Outcome> outcomes, std::vector<double> probs);
  static FiniteDistribution from_weights(std::vector<Outcome> outcomes, std::vector<double> weights);
  static FiniteDistribution point_mass(Outcome o);

  std::size_t size() const { return outcomes_.size(); }
  Outcome outcome(std::size_t i) const { return outcomes_[i]; }
  double prob(std::size_t i) const { return probs_[i]; }
  const std::vector<Outcome>& outcomes() const { return outcomes_; }
  const std::vector<double>& probs() const { return probs_; }

  double probability(const Event& e) const;
  double expectation(const std::function<double(Outcome)>& f) const;
  // Throws std::domain_error when P(E) = 0.
  FiniteDistribution conditioned(const Event& e) const;

 private:
  std::vector<Outcome> outcomes_;
  std::vector<double> probs_;
};

}  // namespace hclab
