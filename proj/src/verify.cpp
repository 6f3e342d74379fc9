#include "hclab/verify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <stdexcept>
#include <unordered_map>

#include "hclab/entropy.hpp"
#include "hclab/order.hpp"

namespace hclab {

namespace {

constexpr std::size_t kExposureEvenCap = 16;

std::uint64_t low32(std::uint64_t o) { return o & 0xffffffffULL; }
std::uint64_t high32(std::uint64_t o) { return o >> 32; }

double safe_log(double x) { return x > 0 ? std::log(x) : -std::numeric_limits<double>::infinity(); }

BigInt binom(unsigned long n, unsigned long k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

// sum_k counts[k] x^k
Rational poly_eval(const std::vector<BigInt>& counts, const Rational& x) {
  Rational acc = 0;
  for (std::size_t k = counts.size(); k-- > 0;) acc = acc * x + Rational(counts[k]);
  return acc;
}

double poly_eval_d(const std::vector<std::uint64_t>& counts, double x) {
  double acc = 0;
  for (std::size_t k = counts.size(); k-- > 0;) acc = acc * x + static_cast<double>(counts[k]);
  return acc;
}

std::vector<BigInt> to_big(const std::vector<std::uint64_t>& c) {
  std::vector<BigInt> out;
  out.reserve(c.size());
  for (auto v : c) out.emplace_back(std::to_string(v));
  return out;
}

// Joint law of (A, sigma), packed as (A << 32) | sigma.
FiniteDistribution joint_distribution(const FiniteDistribution& sigma,
                                      const std::vector<std::pair<std::uint64_t, double>>& a_dist) {
  std::vector<Outcome> outs;
  std::vector<double> probs;
  for (const auto& [a, pa] : a_dist) {
    if (pa <= 0) continue;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
      if (sigma.prob(i) <= 0) continue;
      if (sigma.outcome(i) >> 32) throw CapExceeded("joint (A, sigma) packing needs |V| <= 32");
      outs.push_back(a << 32 | sigma.outcome(i));
      probs.push_back(pa * sigma.prob(i));
    }
  }
  return FiniteDistribution::from_weights(std::move(outs), std::move(probs));
}

struct ThreeTerms {
  double lhs = 0, t1 = 0, t2 = 0, t3 = 0, s = 0;
};

ThreeTerms three_terms(const BipartiteGraph& g, const FiniteDistribution& sigma,
                       const ExposureScheme& scheme, const FugacityParams& lambda) {
  if (g.vertex_count() > 32) throw CapExceeded("three-term decomposition needs |V| <= 32");
  ThreeTerms t;
  t.s = exposure_density(g, scheme);
  if (t.s <= 0) throw std::invalid_argument("exposure density is zero");
  const std::uint64_t even = g.class_mask(Parity::Even), odd = g.class_mask(Parity::Odd);
  t.lhs = free_energy(sigma, lambda);
  t.t1 = conditional_free_energy(sigma, project(even), project(odd), nullptr, lambda);

  auto joint = joint_distribution(sigma, scheme.a_dist);
  auto order = std::make_shared<MaskOrder>(g);
  std::unordered_map<std::uint64_t, std::uint64_t> b_cache;
  for (const auto& [a, pa] : scheme.a_dist) b_cache[a] = scheme.b_of(g, a);
  View sigma_b = [&b_cache](Outcome o) { return low32(o) & b_cache.at(high32(o)); };
  View a_and_phi = [order](Outcome o) {
    std::uint64_t a = high32(o);
    return a << 32 | (order->field(low32(o)).phi_even & a);
  };
  View phi_a = [order](Outcome o) { return order->field(low32(o)).phi_even & high32(o); };
  View a_only = [](Outcome o) { return high32(o); };
  t.t2 = conditional_free_energy(joint, sigma_b, a_and_phi, nullptr, lambda);
  t.t3 = conditional_entropy(joint, phi_a, a_only);
  return t;
}

double max_inclusion(const std::vector<std::pair<std::uint64_t, double>>& a_dist, std::size_t n) {
  std::vector<double> inc(n, 0.0);
  for (const auto& [a, p] : a_dist)
    for (std::size_t v = 0; v < n; ++v)
      if (a >> v & 1) inc[v] += p;
  return inc.empty() ? 0.0 : *std::max_element(inc.begin(), inc.end());
}

double roughness_of_mask(const BipartiteGraph& g, std::uint64_t phi) {
  std::size_t dis = 0;
  for (const auto& e : g.edges()) dis += ((phi >> e.u) ^ (phi >> e.v)) & 1;
  return static_cast<double>(dis) / static_cast<double>(g.edge_count());
}

ConstantFit make_fit(std::string id, std::string direction) {
  ConstantFit f;
  f.id = std::move(id);
  f.direction = std::move(direction);
  return f;
}

}  // namespace

// ---------------------------------------------------------------- exposure

ExposureScheme ExposureScheme::iid(const BipartiteGraph& g, std::optional<double> p) {
  auto evens = g.even_vertices();
  if (evens.size() > kExposureEvenCap)
    throw CapExceeded("iid exposure needs at most 16 even vertices");
  const double q = p ? *p : 1.0 / static_cast<double>(g.delta());
  if (q < 0 || q > 1) throw std::invalid_argument("inclusion probability outside [0,1]");
  ExposureScheme s;
  s.name = "iid";
  const std::size_t k = evens.size();
  for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << k); ++sub) {
    std::uint64_t mask = 0;
    int c = 0;
    for (std::size_t i = 0; i < k; ++i)
      if (sub >> i & 1) {
        mask |= std::uint64_t{1} << evens[i];
        ++c;
      }
    double pr = std::pow(q, c) * std::pow(1 - q, static_cast<double>(k) - c);
    s.a_dist.emplace_back(mask, pr);
  }
  return s;
}

ExposureScheme ExposureScheme::with_all_odd(const BipartiteGraph&, ExposureScheme base) {
  base.b_all_odd = true;
  base.name += "+all_odd";
  return base;
}

std::uint64_t ExposureScheme::b_of(const BipartiteGraph& g, std::uint64_t a) const {
  const std::uint64_t odd = g.class_mask(Parity::Odd);
  if (b_all_odd) return odd;
  std::uint64_t b = 0;
  for (Vertex u = 0; u < g.vertex_count(); ++u)
    if ((odd >> u & 1) && std::popcount(g.neighbor_mask(u) & a) >= 2) b |= std::uint64_t{1} << u;
  return b;
}

double exposure_density_closed_form(std::size_t delta) {
  if (delta == 0) throw std::invalid_argument("delta must be positive");
  const double q = 1.0 - 1.0 / static_cast<double>(delta);
  return 1.0 - std::pow(q, static_cast<double>(delta)) - std::pow(q, static_cast<double>(delta) - 1);
}

double exposure_density(const BipartiteGraph& g, const ExposureScheme& scheme) {
  auto odds = g.odd_vertices();
  if (odds.empty()) throw std::invalid_argument("no odd vertices");
  std::vector<double> s(g.vertex_count(), 0.0);
  for (const auto& [a, p] : scheme.a_dist) {
    std::uint64_t b = scheme.b_of(g, a);
    for (Vertex u : odds)
      if (b >> u & 1) s[u] += p;
  }
  double first = s[odds.front()];
  for (Vertex u : odds)
    if (std::abs(s[u] - first) > 1e-12)
      throw std::invalid_argument("P(u in B) differs between odd vertices " +
                                  std::to_string(odds.front()) + " and " + std::to_string(u));
  return first;
}

CheckReport exposure_density_check(std::size_t delta, std::size_t samples, std::uint64_t seed) {
  if (delta == 0 || delta > 20) throw std::invalid_argument("delta must be in [1, 20]");
  const double closed = exposure_density_closed_form(delta);
  const double q = 1.0 / static_cast<double>(delta);
  double exact = 0;
  for (std::uint32_t sub = 0; sub < (1u << delta); ++sub) {
    int c = std::popcount(sub);
    if (c >= 2) exact += std::pow(q, c) * std::pow(1 - q, static_cast<double>(delta) - c);
  }
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(q);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    int c = 0;
    for (std::size_t j = 0; j < delta; ++j) c += coin(rng);
    hits += c >= 2;
  }
  CheckAccumulator acc("exposure_density", 0.0);
  acc.add_exact(std::abs(exact - closed) <= 1e-12, exact, closed, "exact enumeration");
  double mc = samples ? static_cast<double>(hits) / static_cast<double>(samples) : closed;
  double sd = samples ? std::sqrt(closed * (1 - closed) / static_cast<double>(samples)) : 0.0;
  acc.add_exact(std::abs(mc - closed) <= 3 * sd + 1e-15, mc, closed, "monte carlo");
  auto r = acc.finish();
  r.details["delta"] = delta;
  r.details["closed_form"] = closed;
  r.details["exact"] = exact;
  r.details["monte_carlo"] = mc;
  r.details["sigma"] = sd;
  r.details["samples"] = samples;
  r.details["seed"] = seed;
  return r;
}

// ---------------------------------------------------------------- distributions

FiniteDistribution random_config_distribution(const std::vector<std::uint64_t>& configs,
                                              std::mt19937_64& rng) {
  if (configs.empty()) throw std::invalid_argument("no configurations");
  std::bernoulli_distribution keep(0.5);
  std::normal_distribution<double> gauss(0.0, 1.5);
  std::vector<Outcome> outs;
  std::vector<double> w;
  for (auto c : configs)
    if (keep(rng)) {
      outs.push_back(c);
      w.push_back(std::exp(gauss(rng)));
    }
  if (outs.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, configs.size() - 1);
    outs.push_back(configs[pick(rng)]);
    w.push_back(1.0);
  }
  return FiniteDistribution::from_weights(std::move(outs), std::move(w));
}

FiniteDistribution gibbs_distribution(const BipartiteGraph& g, const FugacityParams& lambda) {
  return exact_distribution(g, lambda);
}

FiniteDistribution phi_distribution(const BipartiteGraph& g, const FiniteDistribution& sigma) {
  MaskOrder order(g);
  std::map<std::uint64_t, double> acc;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    auto f = order.field(sigma.outcome(i));
    acc[f.phi_even | f.phi_odd] += sigma.prob(i);
  }
  std::vector<Outcome> outs;
  std::vector<double> w;
  for (const auto& [k, p] : acc) {
    outs.push_back(k);
    w.push_back(p);
  }
  return FiniteDistribution::from_weights(std::move(outs), std::move(w));
}

double expected_roughness(const BipartiteGraph& g, const FiniteDistribution& phi) {
  return phi.expectation([&g](Outcome o) { return roughness_of_mask(g, o); });
}

// ---------------------------------------------------------------- three-term and gain

CheckReport three_term_check(const BipartiteGraph& g, const FiniteDistribution& sigma,
                             const ExposureScheme& scheme, const FugacityParams& lambda) {
  auto t = three_terms(g, sigma, scheme, lambda);
  const double rhs = t.t1 + (t.t2 + t.t3) / t.s;
  CheckAccumulator acc("three_term", 1e-10);
  acc.add_le(t.lhs, rhs, "inequality");
  if (scheme.b_all_odd) acc.add_eq(t.lhs, rhs, "equality with B = V_O");
  auto r = acc.finish();
  r.details["scheme"] = scheme.name;
  r.details["s"] = t.s;
  r.details["I_sigma"] = t.lhs;
  r.details["I_even_given_odd"] = t.t1;
  r.details["I_sigma_B_given_A_phi"] = t.t2;
  r.details["S_phi_A_given_A"] = t.t3;
  r.details["rhs"] = rhs;
  r.details["slack"] = rhs - t.lhs;
  return r;
}

CheckReport two_neighbour_coupling_check(const BipartiteGraph& g, const ExposureScheme& scheme) {
  const std::size_t delta = g.delta();
  CheckAccumulator acc("two_neighbour_coupling", 1e-12);
  if (delta > 4) {
    auto r = acc.finish();
    r.details["skipped"] = true;
    r.details["reason"] = "coupling is only constructed for delta <= 4";
    return r;
  }
  const std::size_t npairs = delta * delta;
  const double pair_mass = 1.0 / static_cast<double>(npairs);
  // pairs (i, j) contained in a local subset S of N(u)
  std::vector<std::uint32_t> pairs_in(std::size_t{1} << delta, 0);
  for (std::uint32_t s = 0; s < pairs_in.size(); ++s)
    for (std::size_t i = 0; i < delta; ++i)
      for (std::size_t j = 0; j < delta; ++j)
        if ((s >> i & 1) && (s >> j & 1)) pairs_in[s] |= 1u << (i * delta + j);

  for (Vertex u : g.odd_vertices()) {
    auto nb = g.neighbors(u);
    std::vector<double> law(pairs_in.size(), 0.0);
    double pu = 0;
    for (const auto& [a, p] : scheme.a_dist) {
      if (!(scheme.b_of(g, a) >> u & 1)) continue;
      std::uint32_t s = 0;
      for (std::size_t i = 0; i < delta; ++i)
        if (a >> nb[i] & 1) s |= 1u << i;
      law[s] += p;
      pu += p;
    }
    if (pu <= 0) continue;
    for (auto& x : law) x /= pu;
    double worst = std::numeric_limits<double>::infinity();
    std::uint32_t worst_set = 0;
    double worst_l = 0, worst_r = 0;
    for (std::uint32_t set = 1; set < (1u << npairs); ++set) {
      double lhs = std::popcount(set) * pair_mass;
      double rhs = 0;
      for (std::size_t s = 0; s < law.size(); ++s)
        if (law[s] > 0 && (pairs_in[s] & set)) rhs += law[s];
      if (rhs - lhs < worst) {
        worst = rhs - lhs;
        worst_set = set;
        worst_l = lhs;
        worst_r = rhs;
      }
    }
    acc.add_le(worst_l, worst_r,
               "odd vertex " + std::to_string(u) + ", pair set " + std::to_string(worst_set));
  }
  auto r = acc.finish();
  r.details["delta"] = delta;
  r.details["pairs"] = "ordered, with replacement";
  return r;
}

CheckReport gain_terms_check(const BipartiteGraph& g, const FiniteDistribution& sigma,
                             const ExposureScheme& scheme, const FugacityParams& lambda) {
  auto t = three_terms(g, sigma, scheme, lambda);
  const double lt = lambda.lambda_tilde;
  const double n = static_cast<double>(g.vertex_count());
  const double delta = static_cast<double>(g.delta());
  MaskOrder order(g);
  auto odds = g.odd_vertices();

  std::vector<MaskField> fields(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) fields[i] = order.field(sigma.outcome(i));

  // E[prod_{v in N(u) & A}(1 - phi_v) + phi_hat_u - 1 ; u in B]
  std::vector<double> r1_acc(g.vertex_count(), 0.0), pb(g.vertex_count(), 0.0);
  for (const auto& [a, pa] : scheme.a_dist) {
    if (pa <= 0) continue;
    std::uint64_t b = scheme.b_of(g, a);
    for (Vertex u : odds) {
      if (!(b >> u & 1)) continue;
      pb[u] += pa;
      const std::uint64_t nu = g.neighbor_mask(u);
      for (std::size_t i = 0; i < sigma.size(); ++i) {
        const auto& f = fields[i];
        double prod = (f.phi_even & nu & a) ? 0.0 : 1.0;
        double hat = std::popcount(f.phi_even & nu) / delta;
        r1_acc[u] += pa * sigma.prob(i) * (prod + hat - 1.0);
      }
    }
  }
  double r1 = 0, r2 = 0, ephi = 0;
  for (Vertex u : odds)
    if (pb[u] > 0) r1 += r1_acc[u] / pb[u];
  r1 *= lt;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const auto& f = fields[i];
    double inner = 0;
    for (Vertex u : odds) {
      double hat = std::popcount(f.phi_even & g.neighbor_mask(u)) / delta;
      inner += hat * (1 - hat);
    }
    r2 += sigma.prob(i) * inner;
    ephi += sigma.prob(i) * static_cast<double>(f.disagreements) /
            static_cast<double>(g.edge_count());
  }
  r2 *= -lt;
  const double r3 = -0.25 * lt * n * ephi;
  const double lhs = t.t1 + t.t2 / t.s - lt * n / 2;

  CheckAccumulator acc("gain_terms", 1e-10);
  acc.add_le(lhs, r1, "(1)");
  acc.add_le(r1, r2, "(2)");
  acc.add_le(r2, r3, "(3)");
  auto coupling = two_neighbour_coupling_check(g, scheme);
  auto r = acc.finish();
  r.details["s"] = t.s;
  r.details["gain_lhs"] = lhs;
  r.details["after_1"] = r1;
  r.details["after_2"] = r2;
  r.details["after_3"] = r3;
  r.details["E_Phi"] = ephi;
  r.details["coupling"] = coupling.to_json();
  return r;
}

// ---------------------------------------------------------------- loss term

CertifiedExpansion certified_expansion(const BipartiteGraph& g, const std::optional<TorusSpec>& torus) {
  CertifiedExpansion out;
  if (torus) {
    try {
      auto cert = torus_local_expansion_certificate(*torus);
      auto rep = verify_local_expansion(g, cert, VerifyMode::Exact);
      if (rep.pass) {
        out.cert = std::move(cert);
        out.verification = std::move(rep);
        out.kind = "torus";
        return out;
      }
      out.verification.details["torus_attempt"] = rep.to_json();
    } catch (const std::exception& e) {
      out.verification.details["torus_attempt_error"] = e.what();
    }
  }
  LocalExpansionCertificate cert{Rational(1), Rational(1), single_edge_source(g)};
  Json prior = out.verification.details;
  out.verification = verify_local_expansion(g, cert, VerifyMode::Exact);
  for (auto it = prior.begin(); it != prior.end(); ++it) out.verification.details[it.key()] = it.value();
  out.cert = std::move(cert);
  out.kind = "single_edge";
  return out;
}

CheckReport loss_term_check(const BipartiteGraph& g, const FiniteDistribution& phi,
                            const std::vector<std::pair<std::uint64_t, double>>& a_dist,
                            const LocalExpansionCertificate& cert) {
  const double n = static_cast<double>(g.vertex_count());
  const double delta = static_cast<double>(g.delta());
  double lhs = 0;
  std::unordered_map<std::uint64_t, double> cache;
  for (const auto& [a, p] : a_dist) {
    if (p <= 0) continue;
    auto it = cache.find(a);
    if (it == cache.end()) it = cache.emplace(a, entropy_of(phi, project(a))).first;
    lhs += p * it->second;
  }
  const double pmax = max_inclusion(a_dist, g.vertex_count());
  const double ephi = expected_roughness(g, phi);
  const double c = to_double(cert.c_le), m = to_double(cert.m_le);
  const double rhs = c * n * (2 * (pmax + 1 / delta) * binary_entropy(ephi) + std::log(2.0) / (delta * m));
  auto r = le_report("loss_term", lhs, rhs, 1e-10);
  r.details["p"] = pmax;
  r.details["E_Phi"] = ephi;
  r.details["C_LE"] = to_string(cert.c_le);
  r.details["M_LE"] = to_string(cert.m_le);
  r.details["source"] = cert.source.description;
  return r;
}

CheckReport simplified_route_check(const BipartiteGraph& g, const FiniteDistribution& phi,
                                   const SubgraphSource& trees) {
  if (!trees.support) throw std::invalid_argument("simplified route needs an enumerated tree law");
  const auto& support = *trees.support;
  std::map<Edge, double> edge_prob;
  double lhs = 0;
  std::unordered_map<std::uint64_t, double> cache;
  for (const auto& t : support) {
    for (const auto& e : t.edges) edge_prob[e] += t.prob;
    std::uint64_t vm = 0;
    for (Vertex v : t.vertices) vm |= std::uint64_t{1} << v;
    auto it = cache.find(vm);
    if (it == cache.end()) it = cache.emplace(vm, entropy_of(phi, project(vm))).first;
    lhs += t.prob * it->second;
  }
  double q = 0;
  for (const auto& [e, p] : edge_prob) q = std::max(q, p);
  const double ne = static_cast<double>(g.edge_count());
  const double ephi = expected_roughness(g, phi);
  const double rhs = q * ne * binary_entropy(ephi) + std::log(2.0);

  CheckAccumulator acc("simplified_route", 1e-10);
  acc.add_le(lhs, rhs, "entropy bound");
  Rational m_le(q * ne);
  Rational c_le = Rational(static_cast<unsigned long>(g.delta())) * m_le /
                  Rational(static_cast<unsigned long>(g.vertex_count()));
  LocalExpansionCertificate cert{c_le, m_le, trees};
  auto ver = verify_local_expansion(g, cert, VerifyMode::Exact);
  acc.add_exact(ver.pass, ver.lhs, ver.rhs, "derived local expansion parameters");
  auto r = acc.finish();
  r.details["q"] = q;
  r.details["E_Phi"] = ephi;
  r.details["entropy_lhs"] = lhs;
  r.details["entropy_rhs"] = rhs;
  r.details["M_LE"] = m_le.get_d();
  r.details["C_LE"] = c_le.get_d();
  r.details["local_expansion"] = ver.to_json();
  return r;
}

// ---------------------------------------------------------------- constant fits

Json ConstantFit::to_json() const {
  Json j;
  j["id"] = id;
  j["direction"] = direction;
  j["constant"] = std::isfinite(constant) ? Json(constant) : Json(nullptr);
  j["grid_size"] = grid_size;
  j["informative"] = informative;
  j["certified"] = certified;
  j["recert_failures"] = recert_failures;
  j["worst_instance"] = worst_instance;
  j["details"] = details;
  return j;
}

ConstantFit prop_I_le_Phi_constant_fit(const std::vector<PropInstance>& grid) {
  auto fit = make_fit("prop_I_le_Phi", "min C such that the free energy is bounded by the surface term");
  struct Row {
    double lhs, unit;
  };
  std::vector<Row> rows;
  double best = 0;
  for (const auto& inst : grid) {
    const auto& g = *inst.graph;
    const double n = static_cast<double>(g.vertex_count());
    const double delta = static_cast<double>(g.delta());
    const double lt = inst.lambda.lambda_tilde;
    MaskOrder order(g);
    double ephi = inst.sigma.expectation([&](Outcome o) {
      return static_cast<double>(order.field(o).disagreements) / static_cast<double>(g.edge_count());
    });
    double I = free_energy(inst.sigma, inst.lambda);
    double lhs = I / n - lt / 2 + lt * ephi / 4;
    double surface = ephi > 0 ? ephi * (1 - std::log(ephi)) : 0.0;
    double unit = to_double(inst.c_le) / delta * (surface + 1 / to_double(inst.m_le));
    rows.push_back({lhs, unit});
    double need = lhs / unit;
    if (need > 0) {
      ++fit.informative;
      if (need > best) {
        best = need;
        fit.worst_instance = inst.label;
      }
    }
  }
  fit.constant = best;
  fit.grid_size = grid.size();
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].lhs > best * rows[i].unit + 1e-12 * std::max(1.0, std::abs(rows[i].lhs))) {
      ++fit.recert_failures;
    }
  fit.certified = fit.recert_failures == 0;
  return fit;
}

MainStudy main_theorem_study(const BipartiteGraph& g, const FugacityParams& lambda, double r,
                             const Rational& h) {
  const std::size_t n = g.vertex_count();
  if (n % 2) throw std::invalid_argument("main theorem study needs an even vertex count");
  const std::uint64_t even = g.class_mask(Parity::Even);
  std::vector<std::uint64_t> all(n + 1, 0), ev(n + 1, 0);
  for_each_config(g, [&](std::uint64_t s) {
    auto occ = occupation_mask(s, even);
    ++all[occ.total];
    if (static_cast<double>(occ.m) > r) ++ev[occ.total];
  });
  MainStudy st;
  const double lt = lambda.lambda_tilde;
  const double delta = static_cast<double>(g.delta());
  st.unit = lt * h.get_d() * r / delta;
  CheckAccumulator acc("main_first_inequality", 1e-12);
  if (lambda.exact) {
    const Rational lam = *lambda.exact;
    Rational z = poly_eval(to_big(all), lam), zeta = poly_eval(to_big(ev), lam);
    Rational base = pow_rational(1 + lam, n / 2);
    bool ok = z >= base;  // mu(E) <= zeta(E)/base for every E iff Z >= base
    double mu = zeta.get_d() / z.get_d();
    st.mu_event = sgn(zeta) ? Rational(zeta / z).get_d() : 0.0;
    st.log_ratio = sgn(zeta) ? log_rational(zeta) - log_rational(base) : -std::numeric_limits<double>::infinity();
    acc.add_exact(ok, mu, sgn(zeta) ? std::exp(st.log_ratio) : 0.0, "Z >= (1+lambda)^(|V|/2)");
  } else {
    double z = poly_eval_d(all, lambda.lambda), zeta = poly_eval_d(ev, lambda.lambda);
    st.mu_event = zeta / z;
    double lb = static_cast<double>(n / 2) * lt;
    st.log_ratio = safe_log(zeta) - lb;
    acc.add_le(lb, std::log(z), "Z >= (1+lambda)^(|V|/2)");
  }
  if (std::isfinite(st.log_ratio) && st.unit > 0) st.c_max = -st.log_ratio / st.unit;
  st.report = acc.finish();
  st.report.details["mu_event"] = st.mu_event;
  st.report.details["log_ratio"] = st.log_ratio;
  st.report.details["empirical_exponent"] =
      std::isfinite(st.log_ratio) ? Json(st.log_ratio / lt + static_cast<double>(n) / 2) : Json(nullptr);
  st.report.details["reference_exponent"] = static_cast<double>(n) / 2 - h.get_d() / delta * r;
  st.report.details["r"] = r;
  st.report.details["h"] = to_string(h);
  if (st.c_max) st.report.details["c_max"] = *st.c_max;
  return st;
}

ConstantFit main_theorem_fit(const std::vector<std::pair<std::string, MainStudy>>& grid) {
  auto fit = make_fit("main_second_inequality", "max c such that the event ratio decays with exponent c h r / delta");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [label, st] : grid)
    if (st.c_max) {
      ++fit.informative;
      if (*st.c_max < best) {
        best = *st.c_max;
        fit.worst_instance = label;
      }
    }
  fit.grid_size = grid.size();
  fit.constant = best;
  if (fit.informative == 0) {
    fit.certified = false;
    fit.details["reason"] = "no instance constrains c";
    return fit;
  }
  for (const auto& [label, st] : grid)
    if (std::isfinite(st.log_ratio) && st.log_ratio > -best * st.unit + 1e-12 * std::max(1.0, std::abs(st.log_ratio)))
      ++fit.recert_failures;
  fit.certified = fit.recert_failures == 0;
  fit.details["positive"] = best > 0;
  return fit;
}

CheckReport free_energy_gap(const TorusSpec& spec, const FugacityParams& lambda) {
  spec.validate();
  const double vol = static_cast<double>(spec.vertex_count());
  PartitionResult z = spec.vertex_count() <= kEnumerationCap
                          ? partition_bruteforce(build_torus(spec), lambda)
                          : partition_transfer_torus(spec, lambda);
  const double gap = z.log_z / vol - lambda.lambda_tilde / 2;
  auto r = le_report("free_energy_gap", 0.0, gap, 1e-12);
  r.details["gap"] = gap;
  r.details["log_z"] = z.log_z;
  r.details["method"] = z.method;
  r.details["L"] = spec.L;
  r.details["d"] = spec.d;
  r.details["lambda"] = lambda.label();
  return r;
}

ConstantFit free_energy_gap_fit(const std::vector<std::pair<TorusSpec, FugacityParams>>& grid, double c) {
  auto fit = make_fit("free_energy_gap", "min C such that gap <= (C/d)(1+lambda)^(-c d) + C/L^d");
  struct Row {
    double gap, unit;
  };
  std::vector<Row> rows;
  double best = 0;
  for (const auto& [spec, lam] : grid) {
    auto rep = free_energy_gap(spec, lam);
    double gap = rep.details["gap"].get<double>();
    double unit = std::exp(-c * spec.d * lam.lambda_tilde) / spec.d +
                  1.0 / static_cast<double>(spec.vertex_count());
    rows.push_back({gap, unit});
    double need = gap / unit;
    if (need > 0) ++fit.informative;
    if (need > best) {
      best = need;
      fit.worst_instance = "L=" + std::to_string(spec.L) + " d=" + std::to_string(spec.d) +
                           " lambda=" + lam.label();
    }
  }
  fit.constant = best;
  fit.grid_size = grid.size();
  for (const auto& row : rows)
    if (row.gap > best * row.unit + 1e-12 * std::max(1.0, row.gap)) ++fit.recert_failures;
  fit.certified = fit.recert_failures == 0;
  fit.details["c"] = c;
  return fit;
}

// ---------------------------------------------------------------- binomial tails

namespace {

std::vector<Rational> binomial_pmf(int n, const Rational& p) {
  std::vector<Rational> pmf(n + 1);
  const Rational q = 1 - p;
  for (int j = 0; j <= n; ++j)
    pmf[j] = Rational(binom(n, j)) * pow_rational(p, j) * pow_rational(q, n - j);
  return pmf;
}

}  // namespace

Rational binomial_tail(int n, const Rational& p, const Rational& m) {
  if (n < 0 || p < 0 || p > 1) throw std::invalid_argument("bad binomial parameters");
  auto pmf = binomial_pmf(n, p);
  const Rational np = p * n;
  Rational tail = 0;
  for (int j = 0; j <= n; ++j) {
    Rational dev = Rational(j) - np;
    if (abs(dev) >= m) tail += pmf[j];
  }
  return tail;
}

CheckReport hoeffding_check(int n_max, const std::vector<Rational>& p_grid) {
  if (n_max < 1 || n_max > 60) throw std::invalid_argument("n_max must be in [1, 60]");
  CheckAccumulator acc("hoeffding", 1e-12);
  double worst_ratio = 0;
  std::string worst;
  for (const auto& p : p_grid) {
    if (p <= 0 || p >= 1) throw std::invalid_argument("p must lie strictly inside (0,1)");
    const double lpq = std::log(Rational(p * (1 - p)).get_d());
    for (int n = 1; n <= n_max; ++n) {
      auto pmf = binomial_pmf(n, p);
      const Rational np = p * n;
      // |j - np| for every j, then tails by threshold m
      std::vector<Rational> dev(n + 1);
      for (int j = 0; j <= n; ++j) dev[j] = abs(Rational(j) - np);
      for (int m = 0; m <= n; ++m) {
        Rational tail = 0;
        for (int j = 0; j <= n; ++j)
          if (dev[j] >= m) tail += pmf[j];
        const double log_rhs = std::log(2.0) + static_cast<double>(m) * m / n * lpq;
        std::string w = "n=" + std::to_string(n) + " p=" + to_string(p) + " m=" + std::to_string(m);
        if (sgn(tail) == 0) {
          acc.add_le(0.0, std::exp(log_rhs), w);
          continue;
        }
        const double log_lhs = log_rational(tail);
        acc.add_le(log_lhs, log_rhs, w);
        double ratio = std::exp(log_lhs - log_rhs);
        if (ratio > worst_ratio) {
          worst_ratio = ratio;
          worst = w;
        }
      }
    }
  }
  auto r = acc.finish();
  r.details["comparison"] = "log scale";
  r.details["worst_ratio"] = worst_ratio;
  r.details["worst_instance"] = worst;
  return r;
}

// ---------------------------------------------------------------- fixed size

CheckReport fixed_size_chain_check(const BipartiteGraph& g, std::size_t N,
                                   const std::function<bool(std::uint64_t)>& event) {
  const std::size_t n = g.vertex_count();
  if (n % 2) throw std::invalid_argument("fixed-size chain needs an even vertex count");
  const std::size_t half = n / 2;
  if (N == 0 || N >= half) throw std::invalid_argument("N must satisfy 0 < N < |V|/2");
  const Rational lam = ratio(static_cast<unsigned long>(N), static_cast<unsigned long>(half - N));
  std::vector<BigInt> all(n + 1), ev(n + 1);
  for (auto& x : all) x = 0;
  for (auto& x : ev) x = 0;
  for_each_config(g, [&](std::uint64_t s) {
    int k = std::popcount(s);
    all[k] += 1;
    if (event(s)) ev[k] += 1;
  });
  if (all[N] == 0) throw std::invalid_argument("no independent set of size N");
  const BigInt omega_n = all[N], b_n = ev[N];
  const BigInt choose = binom(half, N);
  const Rational lamN = pow_rational(lam, N);
  const Rational zeta_bn = Rational(b_n) * lamN;
  const Rational zeta_b = poly_eval(ev, lam);
  const Rational base = pow_rational(1 + lam, half);
  const Rational pbin = Rational(choose) * pow_rational(lam / (1 + lam), N) *
                        pow_rational(1 / (1 + lam), half - N);

  CheckAccumulator acc("fixed_size_chain", 0.0);
  const Rational mu_n = ratio(b_n, omega_n);
  const Rational link1 = ratio(b_n, choose);
  const Rational link2 = zeta_bn / (lamN * Rational(choose));
  const Rational link3 = zeta_bn / (base * pbin);
  acc.add_exact(omega_n >= choose, Rational(choose).get_d(), Rational(omega_n).get_d(),
                "|Omega_N| >= C(|V|/2, N)");
  acc.add_exact(mu_n <= link1, mu_n.get_d(), link1.get_d(), "mu_N(B) <= |B & Omega_N| / C(|V|/2, N)");
  acc.add_exact(link1 == link2, link1.get_d(), link2.get_d(), "rewrite with lambda^N");
  acc.add_exact(link2 == link3, link2.get_d(), link3.get_d(), "binomial point probability");
  acc.add_exact(zeta_bn <= zeta_b, zeta_bn.get_d(), zeta_b.get_d(), "zeta(B & Omega_N) <= zeta(B)");
  auto r = acc.finish();
  r.details["lambda"] = to_string(lam);
  r.details["omega_N"] = omega_n.get_str();
  r.details["B_and_omega_N"] = b_n.get_str();
  r.details["mu_N_B"] = mu_n.get_d();
  r.details["binomial_point"] = pbin.get_d();
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  r.details["C_binomial"] = 1.0 / (sqrt_n * pbin.get_d());
  if (sgn(zeta_b) > 0) {
    Rational need = zeta_bn / (pbin * zeta_b);
    r.details["C_needed"] = need.get_d() / sqrt_n;
  }
  return r;
}

// ---------------------------------------------------------------- torus corollary

CorollaryStudy corollary_torus_study(const TorusSpec& spec, const FugacityParams& lambda, double c0) {
  spec.validate();
  if (spec.L % 2) throw std::invalid_argument("corollary study needs even L");
  auto g = build_torus(spec);
  const std::size_t n = g.vertex_count();
  const std::uint64_t even = g.class_mask(Parity::Even), odd = g.class_mask(Parity::Odd);
  const std::size_t delta = g.delta();
  MaskOrder order(g);
  std::vector<std::uint64_t> all(n + 1, 0), bad(n + 1, 0);
  CheckAccumulator sandwich("sandwich", 0.0);
  std::size_t sandwich_fail = 0;
  for_each_config(g, [&](std::uint64_t s) {
    auto occ = occupation_mask(s, even);
    ++all[occ.total];
    if (bad_event_torus(occ, spec, lambda, c0)) ++bad[occ.total];
    long phi_e = std::popcount(order.field(s).phi_even);
    long lo = static_cast<long>(n / 2) - static_cast<long>(delta) * std::popcount(s & odd);
    if (phi_e < lo || phi_e > static_cast<long>(n / 2)) {
      if (sandwich_fail++ == 0)
        sandwich.add_exact(false, static_cast<double>(phi_e), static_cast<double>(lo),
                           "sigma mask " + std::to_string(s));
    }
  });
  CorollaryStudy st;
  st.volume = static_cast<double>(n);
  st.d = spec.d;
  const double lt = lambda.lambda_tilde;
  CheckAccumulator acc("corollary_torus", 1e-12);
  double zeta_d = 0, mu = 0;
  if (lambda.exact) {
    const Rational lam = *lambda.exact;
    Rational z = poly_eval(to_big(all), lam), zeta = poly_eval(to_big(bad), lam);
    Rational base = pow_rational(1 + lam, n / 2);
    st.empty_event = sgn(zeta) == 0;
    mu = st.empty_event ? 0.0 : Rational(zeta / z).get_d();
    double ratio = st.empty_event ? 0.0 : Rational(zeta / base).get_d();
    acc.add_exact(st.empty_event || zeta / z <= zeta / base, mu, ratio, "first inequality");
    if (!st.empty_event) st.rho = (log_rational(zeta) - log_rational(base)) / lt;
    zeta_d = zeta.get_d();
  } else {
    double z = poly_eval_d(all, lambda.lambda);
    zeta_d = poly_eval_d(bad, lambda.lambda);
    st.empty_event = zeta_d == 0;
    mu = zeta_d / z;
    acc.add_le(static_cast<double>(n / 2) * lt, std::log(z), "first inequality");
    if (!st.empty_event) st.rho = std::log(zeta_d) / lt - static_cast<double>(n / 2);
  }
  acc.add_exact(sandwich_fail == 0, 0.0, static_cast<double>(sandwich_fail), "sandwich on every configuration");
  if (!st.empty_event) {
    if (st.rho >= 0) st.unsatisfiable = true;
    else if (spec.d >= 2) st.c2_needed = std::log(st.volume / -st.rho) / std::log(static_cast<double>(spec.d));
  }
  st.report = acc.finish();
  st.report.details["mu_B"] = mu;
  st.report.details["zeta_B"] = zeta_d;
  st.report.details["rho"] = st.empty_event ? Json(nullptr) : Json(st.rho);
  st.report.details["empty_event"] = st.empty_event;
  st.report.details["sandwich_failures"] = sandwich_fail;
  st.report.details["threshold"] = torus_bad_threshold(spec, c0);
  if (st.c2_needed) st.report.details["C2_needed"] = *st.c2_needed;
  return st;
}

ConstantFit corollary_torus_fit(const std::vector<std::tuple<TorusSpec, FugacityParams, double>>& grid) {
  auto fit = make_fit("corollary_torus_second_inequality",
                      "min C_2 such that zeta(B)/(1+lambda)^(L^d/2) <= (1+lambda)^(-L^d/d^C_2)");
  std::vector<CorollaryStudy> studies;
  double best = -std::numeric_limits<double>::infinity();
  std::size_t unsat = 0;
  for (const auto& [spec, lam, c0] : grid) {
    if (spec.d < 2) throw std::invalid_argument("corollary fit needs d >= 2");
    studies.push_back(corollary_torus_study(spec, lam, c0));
    const auto& st = studies.back();
    std::string label = "L=" + std::to_string(spec.L) + " d=" + std::to_string(spec.d) +
                        " lambda=" + lam.label() + " C0=" + std::to_string(c0);
    if (st.unsatisfiable) {
      ++unsat;
      fit.details["unsatisfiable"].push_back(label);
    }
    if (st.c2_needed) {
      ++fit.informative;
      if (*st.c2_needed > best) {
        best = *st.c2_needed;
        fit.worst_instance = label;
      }
    }
  }
  fit.grid_size = grid.size();
  fit.constant = best;
  if (fit.informative == 0) {
    fit.certified = false;
    fit.details["reason"] = "every event on the grid is empty or unsatisfiable";
    return fit;
  }
  fit.recert_failures = unsat;
  for (const auto& st : studies)
    if (st.c2_needed && st.rho > -st.volume / std::pow(static_cast<double>(st.d), best) +
                                     1e-12 * std::max(1.0, std::abs(st.rho)))
      ++fit.recert_failures;
  fit.certified = fit.recert_failures == 0;
  return fit;
}

// ---------------------------------------------------------------- half-space bad norm

CheckReport bad_norm_halfspace_check(const ChessContext& ctx, const FugacityParams& lambda,
                                     const Rational& c_alpha) {
  const auto& spec = ctx.spec;
  if (spec.L != 2 * spec.ell) throw std::invalid_argument("bad-norm check needs L = 2 ell");
  if (ctx.configs.empty()) throw std::invalid_argument("context was built without enumeration");
  const auto& g = ctx.graph;
  const std::size_t n = g.vertex_count();
  auto ph = phase_observable(spec, lambda, c_alpha);
  auto faces = face_points(spec);
  const std::size_t ntau = ctx.elements.size();

  struct Combo {
    int face, eps;
    std::uint64_t k_mask;
    std::vector<std::uint32_t> ok;  // pattern -> indicator
    std::vector<std::uint64_t> count;              // by size
    std::vector<std::vector<std::uint64_t>> occ;   // [v][size]
    std::uint64_t violations = 0;
    std::uint64_t first_violation = 0;
  };
  Rational ell_d = 1, two_d = 1;
  for (int i = 0; i < spec.d; ++i) {
    ell_d *= spec.ell;
    two_d *= 2;
  }
  const Rational limit = two_d * 3 * ph.alpha;
  std::vector<Combo> combos;
  for (int face = 0; face < static_cast<int>(faces.size()); ++face)
    for (int eps : {-1, 1}) {
      Combo c{face, eps, 0, {}, std::vector<std::uint64_t>(n + 1, 0),
              std::vector<std::vector<std::uint64_t>>(n, std::vector<std::uint64_t>(n + 1, 0))};
      for (std::size_t t = 0; t < ntau; ++t)
        for (int b : faces[face]) c.k_mask |= std::uint64_t{1} << ctx.images[t][b];
      c.k_mask |= g.class_mask(eps < 0 ? Parity::Odd : Parity::Even);
      auto ind = ph.indicator_bh_eps(face, eps);
      c.ok.resize(ind.table.size());
      for (std::size_t p = 0; p < ind.table.size(); ++p) c.ok[p] = ind.table[p] != 0;
      combos.push_back(std::move(c));
    }

  std::vector<std::uint32_t> pats(ntau);
  for (auto s : ctx.configs) {
    for (std::size_t t = 0; t < ntau; ++t) pats[t] = ctx.pattern(s, t);
    const int k = std::popcount(s);
    for (auto& c : combos) {
      bool in = true;
      for (std::size_t t = 0; t < ntau && in; ++t) in = c.ok[pats[t]];
      if (!in) continue;
      ++c.count[k];
      for (std::uint64_t rest = s; rest; rest &= rest - 1) ++c.occ[std::countr_zero(rest)][k];
      if (!(Rational(std::popcount(s & c.k_mask)) < limit)) {
        if (c.violations++ == 0) c.first_violation = s;
      }
    }
  }

  const Rational k_formula = (ratio(1, 2) + ratio(1, 4 * spec.ell)) * pow_rational(Rational(2 * spec.ell), spec.d);
  const double logl = lambda.log_lambda, lt = lambda.lambda_tilde;
  CheckAccumulator acc("bad_norm_halfspace", 1e-10);
  Json per = Json::array();
  for (const auto& c : combos) {
    const std::string tag = "face " + std::to_string(c.face) + " eps " + std::to_string(c.eps);
    const int ksize = std::popcount(c.k_mask);
    acc.add_exact(Rational(ksize) == k_formula, ksize, k_formula.get_d(), tag + ": |K|");
    Json row;
    row["face"] = c.face;
    row["eps"] = c.eps;
    row["K_size"] = ksize;
    std::uint64_t total = 0;
    for (auto x : c.count) total += x;
    row["configs"] = total;
    if (total == 0) {
      row["vacuous"] = true;
      per.push_back(row);
      continue;
    }
    // p_v and zeta in doubles via lambda^k weights
    std::vector<double> w(n + 1);
    for (std::size_t k = 0; k <= n; ++k) w[k] = std::pow(lambda.lambda, static_cast<double>(k));
    double zeta = 0;
    for (std::size_t k = 0; k <= n; ++k) zeta += static_cast<double>(c.count[k]) * w[k];
    double sum_k = 0, sum_kc = 0, pk_mass = 0;
    for (std::size_t v = 0; v < n; ++v) {
      double pv = 0;
      for (std::size_t k = 0; k <= n; ++k) pv += static_cast<double>(c.occ[v][k]) * w[k];
      pv = std::clamp(pv / zeta, 0.0, 1.0);
      double iv = binary_entropy(pv) + pv * logl;
      if (c.k_mask >> v & 1) {
        sum_k += iv;
        pk_mass += pv;
      } else {
        sum_kc += iv;
      }
    }
    const double pK = pk_mass / ksize;
    const double log_zeta = std::log(zeta);
    const double k_bound = ksize * (binary_entropy(pK) + pK * logl);
    const double kc_bound = static_cast<double>(n - ksize) * lt;
    acc.add_le(log_zeta, sum_k + sum_kc, tag + ": subadditivity");
    acc.add_le(sum_k, k_bound, tag + ": concavity on K");
    acc.add_le(sum_kc, kc_bound, tag + ": single sites off K");
    acc.add_exact(c.violations == 0, static_cast<double>(c.violations), 0.0,
                  tag + ": |sigma_K| < 2^d 3 alpha" +
                      (c.violations ? ", sigma mask " + std::to_string(c.first_violation) : ""));
    if (lambda.exact) {
      const Rational lam = *lambda.exact;
      Rational zq = 0, mq = 0, lp = 1;
      for (std::size_t k = 0; k <= n; ++k, lp *= lam) {
        zq += Rational(static_cast<unsigned long>(c.count[k])) * lp;
        std::uint64_t ok = 0;
        for (std::size_t v = 0; v < n; ++v)
          if (c.k_mask >> v & 1) ok += c.occ[v][k];
        mq += Rational(static_cast<unsigned long>(ok)) * lp;
      }
      row["p_K_exact"] = to_string(Rational(mq / (zq * ksize)));
    }
    row["p_K"] = pK;
    row["log_zeta"] = log_zeta;
    row["chain"] = {sum_k + sum_kc, k_bound + kc_bound};
    per.push_back(row);
  }
  auto r = acc.finish();
  r.details["K_formula"] = to_string(k_formula);
  r.details["alpha"] = to_string(ph.alpha);
  r.details["limit"] = to_string(limit);
  r.details["events"] = per;
  return r;
}

// ---------------------------------------------------------------- thresholds and gadgets

Rational weitz_threshold(int max_degree) {
  if (max_degree < 3) throw std::invalid_argument("max degree must be at least 3");
  return pow_rational(Rational(max_degree - 1), max_degree - 1) /
         pow_rational(Rational(max_degree - 2), max_degree);
}

double weitz_threshold_value(int max_degree) {
  if (max_degree < 3) throw std::invalid_argument("max degree must be at least 3");
  const double D = max_degree;
  return std::exp((D - 1) * std::log(D - 1) - D * std::log(D - 2));
}

CheckReport blow_up_equivalence_check(const BipartiteGraph& f, int m, const Rational& lambda) {
  if (m < 1) throw std::invalid_argument("blow-up factor must be positive");
  auto big = blow_up(f, m);
  const Rational lhs = poly_eval(to_big(independence_polynomial(big)), lambda);
  const Rational lam2 = pow_rational(1 + lambda, m) - 1;
  const Rational rhs = poly_eval(to_big(independence_polynomial(f)), lam2);
  CheckAccumulator acc("blow_up_equivalence", 0.0);
  acc.add_exact(lhs == rhs, lhs.get_d(), rhs.get_d(), "exact partition functions");
  auto r = acc.finish();
  r.details["m"] = m;
  r.details["lambda"] = to_string(lambda);
  r.details["lambda_prime"] = to_string(lam2);
  r.details["Z_blow_up"] = to_string(lhs);
  r.details["Z_base"] = to_string(rhs);
  return r;
}

double gadget_balance_reduced(int m, int k, const FugacityParams& lambda) {
  if (k < 1) throw std::invalid_argument("blow-up factor must be positive");
  auto gad = build_linear_gadget(m);
  const auto& g = gad.graph;
  const std::uint64_t even = g.class_mask(Parity::Even);
  const std::size_t n = g.vertex_count();
  std::map<std::pair<int, int>, std::uint64_t> classes;
  int amax = 0;
  for_each_config(g, [&](std::uint64_t s) {
    auto occ = occupation_mask(s, even);
    ++classes[{static_cast<int>(occ.even), static_cast<int>(occ.odd)}];
    amax = std::max<int>(amax, static_cast<int>(std::max(occ.even, occ.odd)));
  });
  // per active vertex: sum_{c=1..k} C(k,c) lambda^c x^c
  std::vector<double> q(k + 1, 0.0);
  for (int c = 1; c <= k; ++c) q[c] = binom(k, c).get_d() * std::pow(lambda.lambda, c);
  std::vector<std::vector<double>> qpow{{1.0}};
  for (int a = 1; a <= amax; ++a) {
    const auto& prev = qpow.back();
    std::vector<double> next(prev.size() + k, 0.0);
    for (std::size_t i = 0; i < prev.size(); ++i)
      for (int c = 1; c <= k; ++c) next[i + c] += prev[i] * q[c];
    qpow.push_back(std::move(next));
  }
  const double thr = 0.1 * lambda.lambda / (1 + lambda.lambda) * static_cast<double>(k) * static_cast<double>(n);
  double z = 0, bal = 0;
  for (const auto& [key, cnt] : classes) {
    const auto& pe = qpow[key.first];
    const auto& po = qpow[key.second];
    double tot_e = 0, tot_o = 0;
    for (double x : pe) tot_e += x;
    for (double x : po) tot_o += x;
    z += static_cast<double>(cnt) * tot_e * tot_o;
    double b = 0;
    for (std::size_t e = 0; e < pe.size(); ++e) {
      if (!(static_cast<double>(e) > thr)) continue;
      for (std::size_t o = 0; o < po.size(); ++o)
        if (static_cast<double>(o) > thr) b += pe[e] * po[o];
    }
    bal += static_cast<double>(cnt) * b;
  }
  return bal / z;
}

double gadget_balance_direct(int m, int k, const FugacityParams& lambda) {
  auto big = blow_up(build_linear_gadget(m).graph, k);
  const std::uint64_t even = big.class_mask(Parity::Even);
  const std::size_t n = big.vertex_count();
  auto w = ConfigSpace::powers(lambda.lambda, n);
  double z = 0, bal = 0;
  for_each_config(big, [&](std::uint64_t s) {
    auto occ = occupation_mask(s, even);
    z += w[occ.total];
    if (balanced_event(occ, n, lambda)) bal += w[occ.total];
  });
  return bal / z;
}

CheckReport gadget_reduction_check(int m, int k, const FugacityParams& lambda) {
  const double red = gadget_balance_reduced(m, k, lambda);
  const double dir = gadget_balance_direct(m, k, lambda);
  auto r = eq_report("gadget_reduction", red, dir, 1e-12);
  r.details["m"] = m;
  r.details["k"] = k;
  r.details["lambda"] = lambda.label();
  return r;
}

std::vector<GadgetScanRow> gadget_threshold_scan(const std::vector<int>& deltas,
                                                 const std::vector<double>& lambdas, int m) {
  std::vector<GadgetScanRow> rows;
  for (int delta : deltas) {
    if (delta < 3 || delta % 3) throw std::invalid_argument("delta must be a positive multiple of 3");
    for (double lam : lambdas) {
      GadgetScanRow row;
      row.delta = delta;
      row.m = m;
      row.lambda = lam;
      row.log_delta_over_delta = std::log(static_cast<double>(delta)) / delta;
      row.mu_balanced = gadget_balance_reduced(m, delta / 3, FugacityParams::from_double(lam));
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace hclab
