#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hclab/distribution.hpp"
#include "hclab/entropy.hpp"
#include "hclab/report.hpp"

namespace hclab {

struct CriterionResult {
  int number = 0;
  std::string title;
  bool pass = true;
  std::string summary;
  double seconds = 0.0;
  Json details = Json::array();
};

struct Criterion {
  int number = 0;
  std::string title;
  std::function<CriterionResult()> run;
};

// The desk-scale acceptance grid, criteria 1..17 in order.
std::vector<Criterion> desk_criteria();
// Runs one criterion, catching exceptions into a failed result with timing.
CriterionResult run_criterion(const Criterion& c);
std::string format_result_line(const CriterionResult& r);

// Random joint law of `coords` binary coordinates (outcome bit j = X_j).
FiniteDistribution random_tuple_distribution(int coords, std::mt19937_64& rng);
// Random subset law covering every coordinate with positive probability.
SubsetDistribution random_subset_distribution(int coords, std::mt19937_64& rng);

}  // namespace hclab
