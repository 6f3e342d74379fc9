#include "hclab/order.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace hclab {

CoarseField coarse_field(const BipartiteGraph& g, const Configuration& s) {
  if (!is_independent(g, s)) throw std::invalid_argument("configuration is not independent");
  const std::size_t n = g.vertex_count();
  CoarseField f;
  f.delta = g.delta();
  f.phi.assign(n, 0);
  f.ones.assign(n, 0);
  for (Vertex v = 0; v < n; ++v) {
    if (g.parity(v) != Parity::Even) continue;
    bool vacant = true;
    for (Vertex u : g.neighbors(v)) vacant = vacant && !s.test(u);
    f.phi[v] = vacant;
  }
  for (Vertex u = 0; u < n; ++u) {
    if (g.parity(u) != Parity::Odd) continue;
    for (Vertex v : g.neighbors(u)) f.ones[u] += f.phi[v];
    f.phi[u] = 2 * f.ones[u] >= f.delta;
  }
  return f;
}

RoughnessValue roughness(const BipartiteGraph& g, const Configuration& s) {
  auto f = coarse_field(g, s);
  std::size_t disagree = 0;
  for (const auto& e : g.edges()) disagree += f.phi[e.u] != f.phi[e.v];
  Rational sum_min = 0;
  for (Vertex u = 0; u < g.vertex_count(); ++u) {
    if (g.parity(u) != Parity::Odd) continue;
    Rational h = f.phi_hat(u);
    sum_min += std::min(h, Rational(1 - h));
  }
  RoughnessValue r;
  r.value = ratio(disagree, static_cast<unsigned long>(g.edge_count()));
  r.value.canonicalize();
  r.odd_formula = ratio(2, static_cast<unsigned long>(g.vertex_count())) * sum_min;
  if (r.value != r.odd_formula) throw std::logic_error("roughness formulas disagree");
  return r;
}

MaskOrder::MaskOrder(const BipartiteGraph& g) : g_(&g) {
  if (g.vertex_count() > 64) throw std::invalid_argument("MaskOrder needs at most 64 vertices");
  delta_ = g.delta();
  even_ = g.class_mask(Parity::Even);
  odd_ = g.class_mask(Parity::Odd);
  odd_list_ = g.odd_vertices();
}

MaskField MaskOrder::field(std::uint64_t sigma) const {
  MaskField f;
  std::uint64_t blocked = 0;
  for (std::uint64_t m = sigma & odd_; m; m &= m - 1)
    blocked |= g_->neighbor_mask(static_cast<Vertex>(std::countr_zero(m)));
  f.phi_even = even_ & ~blocked;
  for (Vertex u : odd_list_) {
    std::uint64_t ones = std::popcount(g_->neighbor_mask(u) & f.phi_even);
    bool maj = 2 * ones >= delta_;
    if (maj) f.phi_odd |= std::uint64_t{1} << u;
    f.disagreements += maj ? delta_ - ones : ones;
    f.min_sum += std::min<std::uint64_t>(ones, delta_ - ones);
  }
  return f;
}

Rational MaskOrder::roughness(std::uint64_t sigma) const {
  Rational r = ratio(field(sigma).disagreements, static_cast<unsigned long>(g_->edge_count()));
  r.canonicalize();
  return r;
}

OccupationStats occupation_mask(std::uint64_t sigma, std::uint64_t even_mask) {
  OccupationStats s;
  s.even = std::popcount(sigma & even_mask);
  s.odd = std::popcount(sigma & ~even_mask);
  s.total = s.even + s.odd;
  s.m = std::min(s.even, s.odd);
  return s;
}

OccupationStats occupation(const BipartiteGraph& g, const Configuration& s) {
  OccupationStats o;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (!s.test(v)) continue;
    (g.parity(v) == Parity::Even ? o.even : o.odd)++;
  }
  o.total = o.even + o.odd;
  o.m = std::min(o.even, o.odd);
  return o;
}

Rational M_le_Phi_bound(std::size_t delta, const Rational& h, const Rational& phi, std::size_t n) {
  if (h <= 0) throw std::invalid_argument("Cheeger bound must be positive");
  return Rational(static_cast<unsigned long>(delta)) / (2 * h) * phi *
         Rational(static_cast<unsigned long>(n));
}

CheckReport check_M_le_Phi(const BipartiteGraph& g, const Configuration& s, const Rational& h) {
  auto occ = occupation(g, s);
  auto phi = roughness(g, s);
  Rational rhs = M_le_Phi_bound(g.delta(), h, phi.value, g.vertex_count());
  auto r = le_report("M_le_Phi", static_cast<double>(occ.m), rhs.get_d(), 0.0);
  r.pass = Rational(static_cast<unsigned long>(occ.m)) <= rhs;
  r.details["Phi"] = phi.value.get_str();
  r.details["rhs_exact"] = rhs.get_str();
  if (!r.pass) r.witness = s.to_bits();
  return r;
}

double torus_bad_threshold(const TorusSpec& spec, double c0) {
  return std::pow(static_cast<double>(spec.L), spec.d + 1) / std::pow(static_cast<double>(spec.d), c0);
}

bool bad_event_torus(const OccupationStats& occ, const TorusSpec& spec, const FugacityParams& lambda,
                     double c0) {
  if (spec.L % 2) throw std::invalid_argument("bad event needs even L");
  const double t = torus_bad_threshold(spec, c0);
  const double mean = static_cast<double>(spec.vertex_count()) / 2.0 * lambda.lambda / (1.0 + lambda.lambda);
  return static_cast<double>(occ.m) > t || std::fabs(static_cast<double>(occ.total) - mean) > t;
}

bool bad_event_torus(const Configuration& s, const TorusSpec& spec, const FugacityParams& lambda,
                     double c0) {
  return bad_event_torus(occupation(build_torus(spec), s), spec, lambda, c0);
}

bool balanced_event(const OccupationStats& occ, std::size_t n, const FugacityParams& lambda) {
  return static_cast<double>(occ.m) > 0.1 * lambda.lambda / (1.0 + lambda.lambda) * static_cast<double>(n);
}

bool balanced_event(const Configuration& s, const BipartiteGraph& g, const FugacityParams& lambda) {
  return balanced_event(occupation(g, s), g.vertex_count(), lambda);
}

bool hamming_split_event(std::uint64_t sigma, int d) {
  for (std::uint64_t m = sigma; m; m &= m - 1) {
    int v = std::countr_zero(m);
    int w = std::popcount(static_cast<unsigned>(v));
    bool even = w % 2 == 0;
    if (even && 2 * w <= d) return false;
    if (!even && 2 * w > d) return false;
  }
  return true;
}

bool coordinate_split_event(std::uint64_t sigma, int d) {
  for (std::uint64_t m = sigma; m; m &= m - 1) {
    int v = std::countr_zero(m);
    int first = (v >> (d - 1)) & 1;  // row-major: coordinate 0 is the top bit
    bool even = std::popcount(static_cast<unsigned>(v)) % 2 == 0;
    if (even && first == 0) return false;
    if (!even && first == 1) return false;
  }
  return true;
}

}  // namespace hclab
