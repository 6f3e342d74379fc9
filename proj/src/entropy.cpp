#include "hclab/entropy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace hclab {

namespace {

double plogp_inv(double p) { return p > 0 ? -p * std::log(p) : 0.0; }

// (y, x, p) triples restricted to E, sorted for deterministic aggregation.
struct Restricted {
  std::vector<std::tuple<std::uint64_t, std::uint64_t, double>> rows;
  double mass = 0.0;
};

Restricted restrict_rows(const FiniteDistribution& dist, const View& x, const View& y,
                         const Event& e) {
  Restricted r;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    double p = dist.prob(i);
    if (p <= 0) continue;
    Outcome o = dist.outcome(i);
    if (e && !e(o)) continue;
    r.rows.emplace_back(y ? y(o) : 0, x(o), p);
    r.mass += p;
  }
  if (!(r.mass > 0)) throw std::domain_error("conditioning on an event of probability zero");
  std::sort(r.rows.begin(), r.rows.end());
  return r;
}

}  // namespace

double shannon_entropy(const FiniteDistribution& dist) {
  double s = 0.0;
  for (double p : dist.probs()) s += plogp_inv(p);
  return s;
}

double conditional_entropy(const FiniteDistribution& dist, const View& x, const View& y,
                           const Event& e) {
  auto r = restrict_rows(dist, x, y, e);
  double s = 0.0;
  std::size_t i = 0;
  while (i < r.rows.size()) {
    std::size_t j = i;
    double py = 0.0;
    while (j < r.rows.size() && std::get<0>(r.rows[j]) == std::get<0>(r.rows[i])) py += std::get<2>(r.rows[j++]);
    // within the y-group, aggregate equal x values
    std::size_t a = i;
    while (a < j) {
      std::size_t b = a;
      double pxy = 0.0;
      while (b < j && std::get<1>(r.rows[b]) == std::get<1>(r.rows[a])) pxy += std::get<2>(r.rows[b++]);
      s += (pxy / r.mass) * std::log(py / pxy);
      a = b;
    }
    i = j;
  }
  return s;
}

double entropy_of(const FiniteDistribution& dist, const View& x, const Event& e) {
  return conditional_entropy(dist, x, nullptr, e);
}

View project(std::uint64_t mask) {
  return [mask](Outcome o) { return o & mask; };
}

View pair_view(View x, View y) {
  return [x = std::move(x), y = std::move(y)](Outcome o) {
    std::uint64_t a = x(o), b = y(o);
    if ((a >> 32) || (b >> 32)) throw std::overflow_error("pair_view components exceed 32 bits");
    return a | (b << 32);
  };
}

double binary_entropy(double x) {
  if (x < 0 || x > 1) throw std::domain_error("binary entropy argument outside [0,1]");
  return plogp_inv(x) + plogp_inv(1 - x);
}

CheckReport binary_entropy_bound_check(const std::vector<double>& grid) {
  CheckAccumulator acc("binary_entropy_bound", 0.0);
  for (double x : grid) {
    double rhs = x > 0 ? x * (1.0 - std::log(x)) : 0.0;
    acc.add_le(binary_entropy(x), rhs, "x=" + std::to_string(x));
  }
  return acc.finish();
}

double kl_divergence(const FiniteDistribution& mu, const FiniteDistribution& nu) {
  std::vector<std::pair<Outcome, double>> ref;
  for (std::size_t i = 0; i < nu.size(); ++i) ref.emplace_back(nu.outcome(i), nu.prob(i));
  std::sort(ref.begin(), ref.end());
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    double p = mu.prob(i);
    if (p <= 0) continue;
    auto it = std::lower_bound(ref.begin(), ref.end(), std::make_pair(mu.outcome(i), -1.0));
    if (it == ref.end() || it->first != mu.outcome(i) || it->second <= 0)
      throw std::domain_error("KL divergence: first measure not absolutely continuous");
    s += p * std::log(p / it->second);
  }
  return s;
}

// ---------------------------------------------------------------- Shearer

double SubsetDistribution::inclusion(int j) const {
  double p = 0.0;
  for (std::size_t i = 0; i < subsets.size(); ++i)
    if (subsets[i] >> j & 1) p += probs[i];
  return p;
}

double SubsetDistribution::min_inclusion(int coords) const {
  double m = 1.0;
  for (int j = 0; j < coords; ++j) m = std::min(m, inclusion(j));
  return m;
}

namespace {

std::uint64_t full_mask(int coords) {
  return coords >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << coords) - 1;
}

void require_inclusion(const SubsetDistribution& k, int coords, double p) {
  if (!(p > 0)) throw std::invalid_argument("Shearer needs p > 0");
  for (int j = 0; j < coords; ++j)
    if (k.inclusion(j) < p - 1e-12)
      throw std::invalid_argument("coordinate " + std::to_string(j) +
                                  " is included with probability below p");
}

double expected_block_entropy(const FiniteDistribution& joint, const SubsetDistribution& k) {
  double s = 0.0;
  for (std::size_t i = 0; i < k.subsets.size(); ++i)
    if (k.probs[i] > 0) s += k.probs[i] * entropy_of(joint, project(k.subsets[i]));
  return s;
}

}  // namespace

CheckReport shearer_check(const FiniteDistribution& joint, int coords, const SubsetDistribution& k,
                          double p) {
  require_inclusion(k, coords, p);
  double lhs = entropy_of(joint, project(full_mask(coords)));
  double rhs = expected_block_entropy(joint, k) / p;
  auto r = le_report("shearer", lhs, rhs, 1e-10);
  r.details["p"] = p;
  return r;
}

CheckReport shearer_chain_route_check(const FiniteDistribution& joint, int coords,
                                      const SubsetDistribution& k, double p) {
  require_inclusion(k, coords, p);
  // H_j = S(X_j | X_<j); S(X) = sum H_j and S(X_K) >= sum_{j in K} H_j.
  std::vector<double> h(coords);
  for (int j = 0; j < coords; ++j)
    h[j] = conditional_entropy(joint, project(std::uint64_t{1} << j), project(full_mask(j)));
  double total = entropy_of(joint, project(full_mask(coords)));
  double chain = std::accumulate(h.begin(), h.end(), 0.0);
  double middle = 0.0;
  for (int j = 0; j < coords; ++j) middle += k.inclusion(j) * h[j];
  double expected = expected_block_entropy(joint, k);
  CheckAccumulator acc("shearer_chain_route", 1e-10);
  acc.add_eq(total, chain, "chain rule");
  acc.add_le(p * total, middle, "p S(X) <= sum P(j in K) H_j");
  acc.add_le(middle, expected, "sum P(j in K) H_j <= E S(X_K)");
  for (std::size_t i = 0; i < k.subsets.size(); ++i) {
    double block = 0.0;
    for (int j = 0; j < coords; ++j)
      if (k.subsets[i] >> j & 1) block += h[j];
    acc.add_le(block, entropy_of(joint, project(k.subsets[i])), "block " + std::to_string(k.subsets[i]));
  }
  return acc.finish();
}

double entropy_lovasz_extension(const FiniteDistribution& joint, int coords,
                                const std::vector<double>& point) {
  std::vector<int> order(coords);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return point[a] > point[b]; });
  double value = 0.0;
  std::uint64_t level = 0;
  for (int i = 0; i < coords; ++i) {
    level |= std::uint64_t{1} << order[i];
    double next = i + 1 < coords ? point[order[i + 1]] : 0.0;
    double gap = point[order[i]] - next;
    if (gap != 0) value += gap * entropy_of(joint, project(level));
  }
  return value;
}

CheckReport shearer_choquet_route_check(const FiniteDistribution& joint, int coords,
                                        const SubsetDistribution& k, double p) {
  require_inclusion(k, coords, p);
  std::vector<double> flat(coords, p), mean(coords);
  for (int j = 0; j < coords; ++j) mean[j] = k.inclusion(j);
  double at_flat = entropy_lovasz_extension(joint, coords, flat);
  double at_mean = entropy_lovasz_extension(joint, coords, mean);
  double expected = expected_block_entropy(joint, k);
  double total = entropy_of(joint, project(full_mask(coords)));
  CheckAccumulator acc("shearer_choquet_route", 1e-10);
  acc.add_eq(at_flat, p * total, "homogeneity");
  acc.add_le(at_flat, at_mean, "monotonicity");
  acc.add_le(at_mean, expected, "convexity (Jensen)");
  return acc.finish();
}

CheckReport entropy_submodularity_check(const FiniteDistribution& joint, int coords) {
  if (coords > 4) throw std::invalid_argument("submodularity check limited to 4 coordinates");
  const std::uint64_t full = full_mask(coords);
  std::vector<double> f(full + 1);
  for (std::uint64_t s = 0; s <= full; ++s) f[s] = entropy_of(joint, project(s));
  CheckAccumulator acc("entropy_submodularity", 1e-10);
  for (std::uint64_t a = 0; a <= full; ++a)
    for (std::uint64_t b = a; b <= full; ++b)
      acc.add_le(f[a & b] + f[a | b], f[a] + f[b],
                 "K1=" + std::to_string(a) + " K2=" + std::to_string(b));
  return acc.finish();
}

// ---------------------------------------------------------------- free energy

double free_energy(const FiniteDistribution& dist, const FugacityParams& lambda) {
  double mean = dist.expectation([](Outcome o) { return static_cast<double>(std::popcount(o)); });
  return shannon_entropy(dist) + lambda.log_lambda * mean;
}

double conditional_free_energy(const FiniteDistribution& dist, const View& x, const View& y,
                               const Event& e, const FugacityParams& lambda) {
  double s = conditional_entropy(dist, x, y, e);
  double mass = 0.0, occ = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    Outcome o = dist.outcome(i);
    if (e && !e(o)) continue;
    mass += dist.prob(i);
    occ += dist.prob(i) * std::popcount(x(o));
  }
  return s + lambda.log_lambda * occ / mass;
}

CheckReport variational_identity_check(const BipartiteGraph& g, const FugacityParams& lambda,
                                       const FiniteDistribution& dist) {
  for (auto o : dist.outcomes())
    if (!is_independent_mask(g, o)) throw std::invalid_argument("distribution leaves Omega");
  auto mu = exact_distribution(g, lambda);
  auto z = partition_bruteforce(g, lambda);
  double i_val = free_energy(dist, lambda);
  double kl = kl_divergence(dist, mu);
  auto r = eq_report("variational_identity", i_val, z.log_z - kl, 1e-10);
  r.details["I"] = i_val;
  r.details["logZ"] = z.log_z;
  r.details["KL"] = kl;
  return r;
}

CheckReport conditioned_free_energy_check(const BipartiteGraph& g, const FugacityParams& lambda,
                                          const Event& e) {
  auto mu = exact_distribution(g, lambda);
  auto cond = mu.conditioned(e);
  double zeta = 0.0;
  double mx = -1e300;
  std::vector<double> logs;
  for (auto o : enumerate_configs(g)) {
    if (!e(o)) continue;
    logs.push_back(std::popcount(o) * lambda.log_lambda);
    mx = std::max(mx, logs.back());
  }
  for (double l : logs) zeta += std::exp(l - mx);
  double log_zeta = mx + std::log(zeta);
  auto r = eq_report("conditioned_free_energy", free_energy(cond, lambda), log_zeta, 1e-10);
  r.details["event_size"] = logs.size();
  return r;
}

CheckReport single_site_free_energy_check(const FiniteDistribution& dist, const View& sigma_v,
                                          const View& x, const View& y, const Event& e,
                                          const FugacityParams& lambda) {
  double mass = 0.0, ex = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    Outcome o = dist.outcome(i);
    if (dist.prob(i) <= 0) continue;
    if (sigma_v(o) > x(o) || x(o) > 1)
      throw std::invalid_argument("sigma_v <= X with X binary is violated");
    if (e && !e(o)) continue;
    mass += dist.prob(i);
    ex += dist.prob(i) * static_cast<double>(x(o));
  }
  if (!(mass > 0)) throw std::domain_error("conditioning on an event of probability zero");
  double lhs = conditional_free_energy(dist, sigma_v, pair_view(x, y), e, lambda);
  return le_report("single_site_free_energy", lhs, lambda.lambda_tilde * ex / mass, 1e-10);
}

CheckReport free_energy_subadditivity_check(const FiniteDistribution& dist,
                                            const std::vector<std::uint64_t>& blocks,
                                            const FugacityParams& lambda) {
  double whole = free_energy(dist, lambda);
  double parts = 0.0;
  for (auto b : blocks) parts += conditional_free_energy(dist, project(b), nullptr, nullptr, lambda);
  return le_report("free_energy_subadditivity", whole, parts, 1e-10);
}

CheckReport free_energy_shearer_check(const FiniteDistribution& dist, int n,
                                      const SubsetDistribution& k, const FugacityParams& lambda) {
  double p = k.inclusion(0);
  for (int v = 1; v < n; ++v)
    if (std::fabs(k.inclusion(v) - p) > 1e-12)
      throw std::invalid_argument("free-energy Shearer needs equal inclusion probabilities");
  double lhs = free_energy(dist, lambda);
  double rhs = 0.0;
  for (std::size_t i = 0; i < k.subsets.size(); ++i)
    if (k.probs[i] > 0)
      rhs += k.probs[i] *
             conditional_free_energy(dist, project(k.subsets[i]), nullptr, nullptr, lambda);
  return le_report("free_energy_shearer", lhs, rhs / p, 1e-10);
}

}  // namespace hclab
