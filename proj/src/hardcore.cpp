#include "hclab/hardcore.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace hclab {

// ---------------------------------------------------------------- Configuration

Configuration Configuration::from_mask(std::size_t n, std::uint64_t mask) {
  if (n > 64) throw std::invalid_argument("mask configurations need at most 64 vertices");
  Configuration c(n);
  if (n > 0) c.words_[0] = n == 64 ? mask : (mask & ((std::uint64_t{1} << n) - 1));
  return c;
}

Configuration Configuration::from_bits(std::string_view bits) {
  Configuration c(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1')
      c.set(static_cast<Vertex>(i));
    else if (bits[i] != '0')
      throw std::invalid_argument("configuration bits must be '0' or '1'");
  }
  return c;
}

void Configuration::set(Vertex v, bool on) {
  std::uint64_t bit = std::uint64_t{1} << (v & 63);
  if (on)
    words_[v >> 6] |= bit;
  else
    words_[v >> 6] &= ~bit;
}

std::size_t Configuration::count() const {
  std::size_t c = 0;
  for (auto w : words_) c += std::popcount(w);
  return c;
}

std::uint64_t Configuration::mask() const {
  if (n_ > 64) throw std::invalid_argument("configuration has more than 64 vertices");
  return n_ ? words_[0] : 0;
}

std::string Configuration::to_bits() const {
  std::string s(n_, '0');
  for (std::size_t i = 0; i < n_; ++i)
    if (test(static_cast<Vertex>(i))) s[i] = '1';
  return s;
}

bool is_independent(const BipartiteGraph& g, const Configuration& s) {
  if (s.size() != g.vertex_count()) throw std::invalid_argument("configuration length mismatch");
  for (const auto& e : g.edges())
    if (s.test(e.u) && s.test(e.v)) return false;
  return true;
}

bool is_independent_mask(const BipartiteGraph& g, std::uint64_t mask) {
  for (std::uint64_t m = mask; m; m &= m - 1) {
    Vertex v = static_cast<Vertex>(std::countr_zero(m));
    if (g.neighbor_mask(v) & mask) return false;
  }
  return true;
}

// ---------------------------------------------------------------- fugacity

FugacityParams FugacityParams::from_double(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("fugacity must be > 0");
  FugacityParams p;
  p.lambda = lambda;
  p.log_lambda = std::log(lambda);
  p.lambda_tilde = std::log1p(lambda);
  return p;
}

FugacityParams FugacityParams::from_rational(const Rational& lambda) {
  if (lambda <= 0) throw std::invalid_argument("fugacity must be > 0");
  FugacityParams p = from_double(lambda.get_d());
  p.log_lambda = log_rational(lambda);
  p.lambda_tilde = log_rational(Rational(lambda + 1));
  p.exact = lambda;
  return p;
}

FugacityParams FugacityParams::parse(std::string_view text) {
  return from_rational(parse_rational(text));
}

std::string FugacityParams::label() const {
  if (exact) return exact->get_str();
  std::ostringstream ss;
  ss.precision(17);
  ss << lambda;
  return ss.str();
}

// ---------------------------------------------------------------- enumeration

void for_each_config(const BipartiteGraph& g, const std::function<void(std::uint64_t)>& fn,
                     std::size_t cap) {
  const std::size_t n = g.vertex_count();
  if (n > cap || n > 64)
    throw CapExceeded("enumeration refused: " + std::to_string(n) + " vertices exceeds cap " +
                      std::to_string(std::min<std::size_t>(cap, 64)));
  if (n == 0) {
    fn(0);
    return;
  }
  std::vector<std::uint64_t> nb(n);
  for (std::size_t v = 0; v < n; ++v) nb[v] = g.neighbor_mask(static_cast<Vertex>(v));
  // Explicit stack of (vertex index, chosen mask, forbidden mask, branch).
  struct Frame {
    std::size_t i;
    std::uint64_t chosen;
    std::uint64_t forbidden;
  };
  std::vector<Frame> stack;
  stack.reserve(2 * n + 2);
  stack.push_back({0, 0, 0});
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    // Skip forced-vacant vertices straight away.
    while (f.i < n && (f.forbidden >> f.i & 1)) ++f.i;
    if (f.i == n) {
      fn(f.chosen);
      continue;
    }
    std::uint64_t bit = std::uint64_t{1} << f.i;
    // push occupied branch first so the vacant branch is visited first
    stack.push_back({f.i + 1, f.chosen | bit, f.forbidden | nb[f.i]});
    stack.push_back({f.i + 1, f.chosen, f.forbidden});
  }
}

std::vector<std::uint64_t> enumerate_configs(const BipartiteGraph& g, std::size_t cap) {
  std::vector<std::uint64_t> out;
  for_each_config(g, [&](std::uint64_t m) { out.push_back(m); }, cap);
  return out;
}

std::vector<std::uint64_t> independence_polynomial(const BipartiteGraph& g, std::size_t cap) {
  std::vector<std::uint64_t> counts(g.vertex_count() + 1, 0);
  for_each_config(g, [&](std::uint64_t m) { ++counts[std::popcount(m)]; }, cap);
  return counts;
}

ConfigSpace ConfigSpace::build(const BipartiteGraph& g, std::size_t cap) {
  ConfigSpace s;
  s.graph = g;
  s.configs = enumerate_configs(g, cap);
  return s;
}

std::vector<std::uint64_t> ConfigSpace::size_counts() const {
  std::vector<std::uint64_t> counts(graph.vertex_count() + 1, 0);
  for (auto m : configs) ++counts[std::popcount(m)];
  return counts;
}

std::vector<double> ConfigSpace::powers(double lambda, std::size_t n) {
  std::vector<double> p(n + 1, 1.0);
  for (std::size_t k = 1; k <= n; ++k) p[k] = p[k - 1] * lambda;
  return p;
}

// ---------------------------------------------------------------- partition functions

Json PartitionResult::to_json() const {
  Json j;
  j["logZ"] = log_z;
  j["method"] = method;
  if (exact) j["exact"] = exact->get_str();
  return j;
}

PartitionResult partition_from_polynomial(const std::vector<std::uint64_t>& counts,
                                          const FugacityParams& lambda, bool want_exact) {
  PartitionResult r;
  r.method = "brute";
  // log-sum-exp over sizes
  double mx = -std::numeric_limits<double>::infinity();
  std::vector<double> terms;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (!counts[k]) continue;
    double t = std::log(static_cast<double>(counts[k])) + static_cast<double>(k) * lambda.log_lambda;
    terms.push_back(t);
    mx = std::max(mx, t);
  }
  double s = 0.0;
  for (double t : terms) s += std::exp(t - mx);
  r.log_z = mx + std::log(s);
  if (want_exact && lambda.exact) {
    Rational z = 0;
    Rational pw = 1;
    for (std::size_t k = 0; k < counts.size(); ++k) {
      if (counts[k]) z += Rational(BigInt(std::to_string(counts[k]))) * pw;
      pw *= *lambda.exact;
    }
    r.exact = z;
    r.log_z = log_rational(z);
  }
  return r;
}

PartitionResult partition_bruteforce(const BipartiteGraph& g, const FugacityParams& lambda,
                                     std::size_t cap) {
  return partition_from_polynomial(independence_polynomial(g, cap), lambda,
                                   g.vertex_count() <= kExactRationalCap);
}

TransferMatrix build_transfer_matrix(const TorusSpec& spec, double lambda, std::size_t slice_cap) {
  spec.validate();
  std::size_t slice_n = 1;
  for (int i = 0; i + 1 < spec.d; ++i) slice_n *= static_cast<std::size_t>(spec.L);
  if (slice_n > slice_cap)
    throw CapExceeded("transfer refused: slice has " + std::to_string(slice_n) +
                      " vertices, cap is " + std::to_string(slice_cap));
  BipartiteGraph slice = spec.d == 1 ? BipartiteGraph::from_edges(1, {})
                                     : build_torus({spec.L, spec.d - 1});
  TransferMatrix t;
  t.states = enumerate_configs(slice, 64);
  const std::size_t S = t.states.size();
  t.matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(S), static_cast<Eigen::Index>(S));
  const double root = std::sqrt(lambda);
  for (std::size_t a = 0; a < S; ++a) {
    for (std::size_t b = 0; b < S; ++b) {
      if (t.states[a] & t.states[b]) continue;
      int k = std::popcount(t.states[a]) + std::popcount(t.states[b]);
      t.matrix(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = std::pow(root, k);
    }
  }
  return t;
}

double log_trace_power(const Eigen::MatrixXd& m, unsigned k) {
  if (k == 0) return std::log(static_cast<double>(m.rows()));
  // Binary powering; each product is rescaled by its largest entry.
  Eigen::MatrixXd result;
  double log_result = 0.0;
  bool have = false;
  Eigen::MatrixXd base = m;
  double log_base = 0.0;
  auto rescale = [](Eigen::MatrixXd& x, double& lg) {
    double mx = x.cwiseAbs().maxCoeff();
    if (mx > 0) {
      x /= mx;
      lg += std::log(mx);
    }
  };
  rescale(base, log_base);
  while (k) {
    if (k & 1) {
      if (!have) {
        result = base;
        log_result = log_base;
        have = true;
      } else {
        result = (result * base).eval();
        log_result += log_base;
        rescale(result, log_result);
      }
    }
    k >>= 1;
    if (k) {
      base = (base * base).eval();
      log_base *= 2;
      rescale(base, log_base);
    }
  }
  return log_result + std::log(result.trace());
}

PartitionResult partition_transfer_torus(const TorusSpec& spec, const FugacityParams& lambda,
                                         int axis, std::size_t slice_cap) {
  if (axis < 0 || axis >= spec.d) throw std::invalid_argument("transfer axis out of range");
  auto t = build_transfer_matrix(spec, lambda.lambda, slice_cap);
  PartitionResult r;
  r.method = "transfer";
  r.log_z = log_trace_power(t.matrix, static_cast<unsigned>(spec.L));
  return r;
}

FiniteDistribution exact_distribution(const BipartiteGraph& g, const FugacityParams& lambda,
                                      std::size_t cap) {
  auto configs = enumerate_configs(g, cap);
  auto z = partition_bruteforce(g, lambda, cap);
  std::vector<double> p(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i)
    p[i] = std::exp(std::popcount(configs[i]) * lambda.log_lambda - z.log_z);
  return FiniteDistribution::from_weights(std::move(configs), std::move(p));
}

double expectation(const BipartiteGraph& g, const FugacityParams& lambda,
                   const std::function<double(std::uint64_t)>& obs, std::size_t cap) {
  return exact_distribution(g, lambda, cap).expectation(obs);
}

// ---------------------------------------------------------------- Glauber

GlauberChain::GlauberChain(const BipartiteGraph& g, double lambda, std::uint64_t seed)
    : GlauberChain(g, lambda, seed, Configuration(g.vertex_count())) {}

GlauberChain::GlauberChain(const BipartiteGraph& g, double lambda, std::uint64_t seed,
                           Configuration start)
    : g_(&g), p_occ_(lambda / (1.0 + lambda)), rng_(seed), state_(Configuration(g.vertex_count())),
      blocked_(g.vertex_count(), 0) {
  if (!is_independent(g, start)) throw std::invalid_argument("start configuration not independent");
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (start.test(v)) set_site(v, true);
}

void GlauberChain::set_site(Vertex v, bool on) {
  if (state_.test(v) == on) return;
  state_.set(v, on);
  occupied_ += on ? 1 : std::size_t(-1);
  for (Vertex u : g_->neighbors(v)) blocked_[u] += on ? 1u : std::uint32_t(-1);
}

void GlauberChain::step() {
  std::uniform_int_distribution<Vertex> pick(0, static_cast<Vertex>(g_->vertex_count() - 1));
  Vertex v = pick(rng_);
  if (blocked_[v]) {
    set_site(v, false);
    return;
  }
  std::uniform_real_distribution<double> u(0.0, 1.0);
  set_site(v, u(rng_) < p_occ_);
}

void GlauberChain::run(std::uint64_t steps) {
  for (std::uint64_t i = 0; i < steps; ++i) step();
}

Configuration glauber_run(const BipartiteGraph& g, double lambda, std::uint64_t steps,
                          std::uint64_t seed) {
  GlauberChain chain(g, lambda, seed);
  chain.run(steps);
  return chain.state();
}

Rational glauber_transition(const BipartiteGraph& g, const Rational& lambda, std::uint64_t from,
                            std::uint64_t to) {
  const Rational pick = ratio(1, static_cast<unsigned long>(g.vertex_count()));
  const Rational p_on = lambda / (lambda + 1);
  const Rational p_off = Rational(1) / (lambda + 1);
  auto site_prob = [&](Vertex v, bool target) -> Rational {
    bool blocked = (g.neighbor_mask(v) & from) != 0;
    if (blocked) return target ? Rational(0) : Rational(1);
    return target ? p_on : p_off;
  };
  std::uint64_t diff = from ^ to;
  if (std::popcount(diff) > 1) return 0;
  if (diff) {
    Vertex v = static_cast<Vertex>(std::countr_zero(diff));
    return pick * site_prob(v, (to >> v) & 1);
  }
  // staying put: sum over all sites of the chance of keeping the value
  Rational stay = 0;
  for (Vertex v = 0; v < g.vertex_count(); ++v) stay += pick * site_prob(v, (from >> v) & 1);
  return stay;
}

// ---------------------------------------------------------------- fixed size

bool relocation_irreducible(const BipartiteGraph& g, const std::vector<std::uint64_t>& omega_n) {
  if (omega_n.size() <= 1) return true;
  std::vector<std::uint64_t> sorted = omega_n;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> uf(sorted.size());
  std::iota(uf.begin(), uf.end(), 0);
  auto find = [&](int x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  const std::size_t n = g.vertex_count();
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    std::uint64_t s = sorted[i];
    for (std::uint64_t occ = s; occ; occ &= occ - 1) {
      std::uint64_t xbit = occ & -occ;
      std::uint64_t rest = s & ~xbit;
      for (std::size_t y = 0; y < n; ++y) {
        std::uint64_t ybit = std::uint64_t{1} << y;
        if ((s & ybit) || (g.neighbor_mask(static_cast<Vertex>(y)) & rest)) continue;
        std::uint64_t t = rest | ybit;
        auto it = std::lower_bound(sorted.begin(), sorted.end(), t);
        int a = find(static_cast<int>(i)), b = find(static_cast<int>(it - sorted.begin()));
        if (a != b) uf[a] = b;
      }
    }
  }
  int root = find(0);
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (find(static_cast<int>(i)) != root) return false;
  return true;
}

FixedSizeSample sample_fixed_size(const BipartiteGraph& g, std::size_t N, std::uint64_t steps,
                                  std::uint64_t seed, std::size_t cap) {
  const std::size_t n = g.vertex_count();
  std::mt19937_64 rng(seed);
  FixedSizeSample out;
  std::vector<Vertex> occ;
  Configuration state(n);
  if (n <= cap && n <= 64) {
    std::vector<std::uint64_t> omega_n;
    for_each_config(g, [&](std::uint64_t m) {
      if (static_cast<std::size_t>(std::popcount(m)) == N) omega_n.push_back(m);
    }, cap);
    if (omega_n.empty())
      throw std::invalid_argument("no independent set of size " + std::to_string(N));
    out.class_size = omega_n.size();
    out.irreducible = relocation_irreducible(g, omega_n);
    std::uniform_int_distribution<std::size_t> pick(0, omega_n.size() - 1);
    state = Configuration::from_mask(n, omega_n[pick(rng)]);
    out.uniform_start = true;
  } else {
    // Greedy start in index order.
    for (Vertex v = 0; v < n && state.count() < N; ++v) {
      bool free = true;
      for (Vertex u : g.neighbors(v)) free = free && !state.test(u);
      if (free) state.set(v);
    }
    if (state.count() < N)
      throw std::invalid_argument("greedy search found no independent set of size " +
                                  std::to_string(N));
  }
  std::vector<std::uint32_t> blocked(n, 0);
  for (Vertex v = 0; v < n; ++v) {
    if (!state.test(v)) continue;
    occ.push_back(v);
    for (Vertex u : g.neighbors(v)) ++blocked[u];
  }
  if (N > 0) {
    std::uniform_int_distribution<std::size_t> pick_occ(0, N - 1);
    std::uniform_int_distribution<Vertex> pick_site(0, static_cast<Vertex>(n - 1));
    for (std::uint64_t s = 0; s < steps; ++s) {
      std::size_t i = pick_occ(rng);
      Vertex x = occ[i];
      Vertex y = pick_site(rng);
      if (state.test(y)) continue;
      std::uint32_t b = blocked[y] - (g.adjacent(x, y) ? 1u : 0u);
      if (b) continue;
      state.set(x, false);
      for (Vertex u : g.neighbors(x)) --blocked[u];
      state.set(y, true);
      for (Vertex u : g.neighbors(y)) ++blocked[u];
      occ[i] = y;
    }
  }
  out.config = state;
  return out;
}

CheckReport trivial_lower_bound_check(const BipartiteGraph& g, const FugacityParams& lambda,
                                      std::size_t cap) {
  std::size_t even = g.even_vertices().size();
  std::size_t odd = g.vertex_count() - even;
  auto z = partition_bruteforce(g, lambda, cap);
  // Occupying any subset of the larger class is legal, so Z >= (1+lambda)^max.
  std::size_t k = std::max(even, odd);
  bool balanced = even == odd;
  CheckReport r = le_report("trivial_lower_bound", static_cast<double>(k) * lambda.lambda_tilde,
                            z.log_z, 1e-12);
  if (z.exact && lambda.exact) {
    Rational bound = pow_rational(Rational(*lambda.exact + 1), static_cast<unsigned long>(k));
    r.pass = *z.exact >= bound;
    r.details["exact_Z"] = z.exact->get_str();
    r.details["exact_bound"] = bound.get_str();
  }
  r.details["balanced"] = balanced;
  r.details["class_size_used"] = k;
  r.details["quantity"] = "log Z >= class_size * log(1+lambda)";
  return r;
}

}  // namespace hclab
