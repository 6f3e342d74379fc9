#include "hclab/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hclab {

FiniteDistribution::FiniteDistribution(std::vector<Outcome> outcomes, std::vector<double> probs)
    : outcomes_(std::move(outcomes)), probs_(std::move(probs)) {
  if (outcomes_.size() != probs_.size())
    throw std::invalid_argument("outcome and probability lists differ in length");
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) throw std::invalid_argument("negative or NaN probability");
    total += p;
  }
  if (std::fabs(total - 1.0) > 1e-12) throw std::invalid_argument("probabilities do not sum to 1");
  auto sorted = outcomes_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("repeated outcome");
}

FiniteDistribution FiniteDistribution::from_weights(std::vector<Outcome> outcomes,
                                                    std::vector<double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) throw std::invalid_argument("weights have no mass");
  for (double& w : weights) w /= total;
  // Renormalise once more so the sum is within rounding of 1.
  double again = 0.0;
  for (double w : weights) again += w;
  for (double& w : weights) w /= again;
  return FiniteDistribution(std::move(outcomes), std::move(weights));
}

FiniteDistribution FiniteDistribution::point_mass(Outcome o) { return FiniteDistribution({o}, {1.0}); }

double FiniteDistribution::probability(const Event& e) const {
  double p = 0.0;
  for (std::size_t i = 0; i < size(); ++i)
    if (e(outcomes_[i])) p += probs_[i];
  return p;
}

double FiniteDistribution::expectation(const std::function<double(Outcome)>& f) const {
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i)
    if (probs_[i] > 0) s += probs_[i] * f(outcomes_[i]);
  return s;
}

FiniteDistribution FiniteDistribution::conditioned(const Event& e) const {
  std::vector<Outcome> o;
  std::vector<double> w;
  for (std::size_t i = 0; i < size(); ++i) {
    if (probs_[i] > 0 && e(outcomes_[i])) {
      o.push_back(outcomes_[i]);
      w.push_back(probs_[i]);
    }
  }
  if (o.empty()) throw std::domain_error("conditioning on an event of probability zero");
  return from_weights(std::move(o), std::move(w));
}

}  // namespace hclab
