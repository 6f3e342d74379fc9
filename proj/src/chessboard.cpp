#include "hclab/chessboard.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "hclab/parallel.hpp"

namespace hclab {

void ReflectionGroupSpec::validate() const {
  if (ell < 1 || d < 1 || L < 2) throw std::invalid_argument("need ell >= 1, d >= 1, L >= 2");
  if (L % (2 * ell) != 0)
    throw std::invalid_argument("L = " + std::to_string(L) + " is not a multiple of 2 ell = " +
                                std::to_string(2 * ell));
  if (block_bits() > 20) throw std::invalid_argument("block has more than 20 points");
}

std::size_t ReflectionGroupSpec::group_size() const {
  std::size_t s = 1;
  for (int i = 0; i < d; ++i) s *= static_cast<std::size_t>(per_axis());
  return s;
}

int ReflectionGroupSpec::block_bits() const {
  int b = 1;
  for (int i = 0; i < d; ++i) b *= ell + 1;
  return b;
}

int AxisElement::apply(int x, int ell, int L) const {
  int y = reflection ? 2 * n * ell - x : x + 2 * n * ell;
  return ((y % L) + L) % L;
}

Vertex GroupElement::apply(const ReflectionGroupSpec& spec, Vertex v) const {
  auto t = spec.torus();
  auto c = t.coords(v);
  for (int i = 0; i < spec.d; ++i) c[i] = axes[i].apply(c[i], spec.ell, spec.L);
  return t.index(c);
}

std::string GroupElement::label() const {
  std::string s;
  for (const auto& a : axes) {
    if (!s.empty()) s += "x";
    s += (a.reflection ? "ref(" : "rot(") + std::to_string(a.n) + ")";
  }
  return s;
}

namespace {

AxisElement axis_tau(int k, int per_axis) {
  const int half = per_axis / 2;
  if (k % 2 == 0) return {false, (k / 2) % half};
  return {true, ((k + 1) / 2) % half};
}

std::vector<int> unindex(std::size_t i, int base, int d) {
  std::vector<int> s(d);
  for (int k = d - 1; k >= 0; --k) {
    s[k] = static_cast<int>(i % base);
    i /= base;
  }
  return s;
}

}  // namespace

std::size_t block_index(const ReflectionGroupSpec& spec, const std::vector<int>& s) {
  std::size_t i = 0;
  const int m = spec.per_axis();
  for (int k = 0; k < spec.d; ++k) i = i * m + static_cast<std::size_t>(((s[k] % m) + m) % m);
  return i;
}

GroupElement tau_s(const ReflectionGroupSpec& spec, const std::vector<int>& s) {
  spec.validate();
  if (static_cast<int>(s.size()) != spec.d) throw std::invalid_argument("s has wrong dimension");
  GroupElement g;
  const int m = spec.per_axis();
  for (int k = 0; k < spec.d; ++k) g.axes.push_back(axis_tau(((s[k] % m) + m) % m, m));
  return g;
}

std::vector<GroupElement> group_elements(const ReflectionGroupSpec& spec) {
  spec.validate();
  std::vector<GroupElement> out;
  for (std::size_t i = 0; i < spec.group_size(); ++i) out.push_back(tau_s(spec, unindex(i, spec.per_axis(), spec.d)));
  return out;
}

std::vector<int> block_coords(const ReflectionGroupSpec& spec, int b) {
  return unindex(static_cast<std::size_t>(b), spec.ell + 1, spec.d);
}

Vertex block_vertex(const ReflectionGroupSpec& spec, int b) {
  auto c = block_coords(spec, b);
  return spec.torus().index(c);
}

CheckReport check_group_structure(const ReflectionGroupSpec& spec) {
  auto ctx = ChessContext::build(spec, kEnumerationCap, false);
  const auto& g = ctx.graph;
  const std::size_t n = g.vertex_count();
  CheckAccumulator acc("group_structure", 0.0);
  std::vector<std::vector<Vertex>> maps;
  for (const auto& el : ctx.elements) {
    std::vector<Vertex> m(n);
    for (Vertex v = 0; v < n; ++v) m[v] = el.apply(spec, v);
    auto sorted = m;
    std::sort(sorted.begin(), sorted.end());
    bool bijective = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
    acc.add_exact(bijective, 0, 0, el.label() + " not bijective");
    bool edges_ok = true;
    for (const auto& e : g.edges()) edges_ok = edges_ok && g.adjacent(m[e.u], m[e.v]);
    acc.add_exact(edges_ok, 0, 0, el.label() + " breaks an edge");
    maps.push_back(std::move(m));
  }
  std::set<std::string> labels;
  for (const auto& el : ctx.elements) labels.insert(el.label());
  acc.add_exact(labels.size() == spec.group_size(), static_cast<double>(labels.size()),
                static_cast<double>(spec.group_size()), "distinct elements");
  std::set<std::vector<Vertex>> map_set(maps.begin(), maps.end());
  for (std::size_t a = 0; a < maps.size(); ++a)
    for (std::size_t b = 0; b < maps.size(); ++b) {
      std::vector<Vertex> comp(n);
      for (Vertex v = 0; v < n; ++v) comp[v] = maps[a][maps[b][v]];
      acc.add_exact(map_set.count(comp) > 0, 0, 0,
                    "composition " + ctx.elements[a].label() + " o " + ctx.elements[b].label());
    }
  // tau_s is the only element taking the block to block + ell s. On Z_2 the
  // block is the whole cycle and the action is not faithful, so skip it there.
  const int bits = spec.block_bits();
  for (std::size_t i = 0; spec.L > 2 && i < spec.group_size(); ++i) {
    auto s = unindex(i, spec.per_axis(), spec.d);
    std::set<Vertex> target;
    for (int b = 0; b < bits; ++b) {
      auto c = block_coords(spec, b);
      for (int k = 0; k < spec.d; ++k) c[k] = (c[k] + spec.ell * s[k]) % spec.L;
      target.insert(spec.torus().index(c));
    }
    std::size_t hits = 0;
    bool tau_hits = false;
    for (std::size_t e = 0; e < maps.size(); ++e) {
      std::set<Vertex> img;
      for (int b = 0; b < bits; ++b) img.insert(maps[e][block_vertex(spec, b)]);
      if (img == target) {
        ++hits;
        tau_hits = tau_hits || e == i;
      }
    }
    acc.add_exact(hits == 1 && tau_hits, static_cast<double>(hits), 1.0, "tau_s for block " + std::to_string(i));
  }
  return acc.finish();
}

// ---------------------------------------------------------------- observables

LocalObservable LocalObservable::constant(int bits, double c) {
  return {bits, std::vector<double>(std::size_t{1} << bits, c)};
}

LocalObservable LocalObservable::site_indicator(int bits, int b) {
  LocalObservable f{bits, std::vector<double>(std::size_t{1} << bits, 0.0)};
  for (std::size_t p = 0; p < f.table.size(); ++p) f.table[p] = (p >> b) & 1;
  return f;
}

LocalObservable LocalObservable::random(int bits, std::mt19937_64& rng, bool nonnegative) {
  std::uniform_real_distribution<double> u(nonnegative ? 0.0 : -1.0, 1.0);
  LocalObservable f{bits, std::vector<double>(std::size_t{1} << bits)};
  for (auto& x : f.table) x = u(rng);
  return f;
}

LocalObservable LocalObservable::scaled(double c) const {
  auto f = *this;
  for (auto& x : f.table) x *= c;
  return f;
}

LocalObservable LocalObservable::plus(const LocalObservable& o) const {
  if (o.bits != bits) throw std::invalid_argument("observables on different blocks");
  auto f = *this;
  for (std::size_t i = 0; i < f.table.size(); ++i) f.table[i] += o.table[i];
  return f;
}

ChessContext ChessContext::build(const ReflectionGroupSpec& spec, std::size_t cap, bool enumerate) {
  spec.validate();
  ChessContext c;
  c.spec = spec;
  c.graph = build_torus(spec.torus());
  if (enumerate) c.configs = enumerate_configs(c.graph, cap);
  c.elements = group_elements(spec);
  const int bits = spec.block_bits();
  for (const auto& el : c.elements) {
    std::vector<Vertex> img(bits);
    for (int b = 0; b < bits; ++b) img[b] = el.apply(spec, block_vertex(spec, b));
    c.images.push_back(std::move(img));
  }
  return c;
}

std::uint32_t ChessContext::pattern(std::uint64_t sigma, std::size_t tau) const {
  std::uint32_t p = 0;
  const auto& img = images[tau];
  for (std::size_t b = 0; b < img.size(); ++b) p |= static_cast<std::uint32_t>(sigma >> img[b] & 1) << b;
  return p;
}

DisseminatedValue disseminated_zeta(const ChessContext& ctx, const std::vector<LocalObservable>& fs,
                                    double lambda) {
  if (fs.size() != ctx.elements.size()) throw std::invalid_argument("need one observable per group element");
  if (ctx.configs.empty()) throw std::invalid_argument("context was built without enumeration");
  auto pw = ConfigSpace::powers(lambda, ctx.graph.vertex_count());
  const std::size_t k = fs.size();
  auto run = [&](bool absolute) {
    return chunked_sum(ctx.configs.size(), [&](std::size_t b, std::size_t e) {
      double s = 0.0;
      for (std::size_t i = b; i < e; ++i) {
        std::uint64_t sigma = ctx.configs[i];
        double prod = pw[std::popcount(sigma)];
        for (std::size_t t = 0; t < k && prod != 0.0; ++t) {
          double v = fs[t](ctx.pattern(sigma, t));
          prod *= absolute ? std::fabs(v) : v;
        }
        s += prod;
      }
      return s;
    });
  };
  return {run(false), run(true)};
}

SeminormValue chessboard_seminorm(const ChessContext& ctx, const LocalObservable& f, double lambda) {
  std::vector<LocalObservable> fs(ctx.elements.size(), f);
  auto dz = disseminated_zeta(ctx, fs, lambda);
  SeminormValue s;
  s.inner = dz.value;
  if (dz.value < 0) {
    if (dz.value < -1e-9 * std::max(dz.abs_value, 1e-300))
      throw std::logic_error("disseminated product is negative (" + std::to_string(dz.value) +
                             "); reflection positivity violated");
    s.clamped = true;
    return s;
  }
  if (dz.value == 0) return s;
  s.norm = std::exp(std::log(dz.value) / static_cast<double>(ctx.elements.size()));
  return s;
}

CheckReport check_chessboard_estimate(const ChessContext& ctx, const std::vector<LocalObservable>& fs,
                                      double lambda) {
  auto lhs = disseminated_zeta(ctx, fs, lambda).value;
  double log_rhs = 0.0;
  bool zero = false;
  for (const auto& f : fs) {
    double nrm = chessboard_seminorm(ctx, f, lambda).norm;
    if (nrm == 0) zero = true;
    else log_rhs += std::log(nrm);
  }
  double rhs = zero ? 0.0 : std::exp(log_rhs);
  auto r = le_report("chessboard_estimate", lhs, rhs, 1e-10 * std::max(1.0, rhs));
  return r;
}

CheckReport check_reflection_positivity(const ChessContext& ctx, double lambda, int trials,
                                        std::uint64_t seed) {
  CheckAccumulator acc("reflection_positivity", 1e-12);
  std::mt19937_64 rng(seed);
  for (int i = 0; i < trials; ++i) {
    auto f = LocalObservable::random(ctx.spec.block_bits(), rng, false);
    std::vector<LocalObservable> fs(ctx.elements.size(), f);
    auto dz = disseminated_zeta(ctx, fs, lambda);
    double scale = std::max(dz.abs_value, 1e-300);
    acc.add_le(0.0, dz.value / scale, "trial " + std::to_string(i));
  }
  return acc.finish();
}

CheckReport check_seminorm_properties(const ChessContext& ctx, double lambda, int trials,
                                      std::uint64_t seed) {
  CheckAccumulator acc("seminorm_properties", 1e-10);
  std::mt19937_64 rng(seed);
  const int bits = ctx.spec.block_bits();
  std::uniform_real_distribution<double> cdist(-3.0, 3.0);
  auto nrm = [&](const LocalObservable& f) { return chessboard_seminorm(ctx, f, lambda).norm; };
  for (int i = 0; i < trials; ++i) {
    std::string w = "trial " + std::to_string(i);
    auto f = LocalObservable::random(bits, rng, true);
    auto h = LocalObservable::random(bits, rng, false);
    double c = cdist(rng);
    double nf = nrm(f);
    double scale = std::max(1.0, nf);
    acc.add_eq(nrm(f.scaled(c)) / scale, std::fabs(c) * nf / scale, w + " homogeneity");
    // f <= f + (nonnegative)
    auto extra = LocalObservable::random(bits, rng, true);
    auto g = f.plus(extra);
    acc.add_le(nf / scale, nrm(g) / scale, w + " monotonicity");
    double nh = nrm(h), nfh = nrm(f.plus(h));
    double s2 = std::max(1.0, nf + nh);
    acc.add_le(nfh / s2, (nf + nh) / s2, w + " triangle");
  }
  return acc.finish();
}

Eigen::Matrix2d interface_matrix(const LocalObservable& f, int ell, double lambda) {
  if (f.bits != ell + 1) throw std::invalid_argument("interface matrix needs a d = 1 observable");
  Eigen::Matrix2d b = Eigen::Matrix2d::Zero();
  const double root = std::sqrt(lambda);
  for (std::uint32_t p = 0; p < (1u << (ell + 1)); ++p) {
    if (p & (p >> 1)) continue;  // adjacent block points both occupied
    int a = p & 1, e = (p >> ell) & 1;
    int interior = std::popcount(p) - a - e;
    double w = std::pow(lambda, interior) * (a ? root : 1.0) * (e ? root : 1.0);
    b(a, e) += f(p) * w;
  }
  return b;
}

double interface_trace(const LocalObservable& f, int ell, int L, double lambda) {
  Eigen::Matrix2d b = interface_matrix(f, ell, lambda);
  Eigen::Matrix2d m = b * b.transpose();
  Eigen::Matrix2d acc = Eigen::Matrix2d::Identity();
  for (int i = 0; i < L / (2 * ell); ++i) acc = acc * m;
  return acc.trace();
}

CheckReport seminorm_torus_comparison(const LocalObservable& f, int ell, int L, int d, double lambda) {
  ReflectionGroupSpec small{ell, L, d}, big{ell, L + 2 * ell, d};
  auto cs = ChessContext::build(small);
  auto cb = ChessContext::build(big);
  auto ns = chessboard_seminorm(cs, f, lambda);
  auto nb = chessboard_seminorm(cb, f, lambda);
  auto r = le_report("seminorm_torus_comparison", nb.norm, ns.norm, 1e-10 * std::max(1.0, ns.norm));
  r.details["L_small"] = L;
  r.details["L_big"] = L + 2 * ell;
  r.details["norm_small"] = ns.norm;
  r.details["norm_big"] = nb.norm;
  if (d == 1) {
    double ts = interface_trace(f, ell, L, lambda), tb = interface_trace(f, ell, L + 2 * ell, lambda);
    bool ok_s = std::fabs(ts - ns.inner) <= 1e-10 * std::max(1.0, std::fabs(ns.inner));
    bool ok_b = std::fabs(tb - nb.inner) <= 1e-10 * std::max(1.0, std::fabs(nb.inner));
    Eigen::Matrix2d m = interface_matrix(f, ell, lambda);
    m = m * m.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
    bool psd = es.eigenvalues().minCoeff() >= -1e-12 * std::max(1.0, es.eigenvalues().maxCoeff());
    r.details["trace_small"] = ts;
    r.details["trace_big"] = tb;
    r.details["interface_psd"] = psd;
    if (!(ok_s && ok_b && psd)) {
      r.pass = false;
      r.witness = "interface trace mismatch or non-PSD interface product";
    }
  }
  return r;
}

// ---------------------------------------------------------------- weighted sums

Rational block_weight(const ReflectionGroupSpec& spec, int b) {
  Rational w = 1;
  for (int c : block_coords(spec, b))
    if (c == 0 || c == spec.ell) w /= 2;
  return w;
}

Rational weighted_sum(const ChessContext& ctx, std::uint64_t sigma, std::uint64_t a_mask, std::size_t tau) {
  Rational s = 0;
  const int bits = ctx.spec.block_bits();
  for (int b = 0; b < bits; ++b) {
    Vertex v = block_vertex(ctx.spec, b);
    if (!(a_mask >> v & 1)) continue;
    if (sigma >> ctx.images[tau][b] & 1) s += block_weight(ctx.spec, b);
  }
  return s;
}

bool is_invariant(const ChessContext& ctx, std::uint64_t a_mask) {
  const std::size_t n = ctx.graph.vertex_count();
  for (const auto& el : ctx.elements)
    for (Vertex v = 0; v < n; ++v)
      if ((a_mask >> v & 1) != (a_mask >> el.apply(ctx.spec, v) & 1)) return false;
  return true;
}

CheckReport check_sums_identity(const ChessContext& ctx, const std::vector<std::uint64_t>& sigmas,
                                std::uint64_t a_mask) {
  if (ctx.graph.vertex_count() > 64) throw std::invalid_argument("masks need at most 64 vertices");
  if (!is_invariant(ctx, a_mask)) throw std::invalid_argument("A is not invariant under the group");
  CheckAccumulator acc("sums_identity", 0.0);
  for (auto sigma : sigmas) {
    Rational total = 0;
    for (std::size_t t = 0; t < ctx.elements.size(); ++t) total += weighted_sum(ctx, sigma, a_mask, t);
    Rational direct = std::popcount(sigma & a_mask);
    acc.add_exact(total == direct, total.get_d(), direct.get_d(), "sigma mask " + std::to_string(sigma));
  }
  return acc.finish();
}

CheckReport check_stabilizers(const ReflectionGroupSpec& spec) {
  auto ctx = ChessContext::build(spec, kEnumerationCap, false);
  CheckAccumulator acc("stabilizers", 0.0);
  for (int b = 0; b < spec.block_bits(); ++b) {
    Vertex v = block_vertex(spec, b);
    std::size_t stab = 0;
    for (std::size_t t = 0; t < ctx.elements.size(); ++t) stab += ctx.images[t][b] == v;
    Rational inv = 1 / block_weight(spec, b);
    acc.add_exact(inv == Rational(static_cast<unsigned long>(stab)), inv.get_d(), static_cast<double>(stab),
                  "block point " + std::to_string(b));
  }
  return acc.finish();
}

// ---------------------------------------------------------------- phase observable

std::vector<std::vector<int>> face_points(const ReflectionGroupSpec& spec) {
  std::vector<std::vector<int>> faces;
  for (int axis = 0; axis < spec.d; ++axis)
    for (int side : {0, spec.ell}) {
      std::vector<int> pts;
      for (int b = 0; b < spec.block_bits(); ++b)
        if (block_coords(spec, b)[axis] == side) pts.push_back(b);
      faces.push_back(std::move(pts));
    }
  return faces;
}

PhaseObservable phase_observable(const ReflectionGroupSpec& spec, const FugacityParams& lambda,
                                 const Rational& c_alpha) {
  spec.validate();
  PhaseObservable ph;
  ph.spec = spec;
  Rational lam = lambda.exact ? *lambda.exact : Rational(lambda.lambda);
  Rational ell_d = 1;
  for (int i = 0; i < spec.d; ++i) ell_d *= spec.ell;
  ph.alpha = c_alpha * lam / (1 + lam) * ell_d;
  const int bits = spec.block_bits();
  // weights in units of 2^-d
  std::vector<long> wnum(bits);
  std::vector<int> parity(bits);
  for (int b = 0; b < bits; ++b) {
    Rational w = block_weight(spec, b) * (1L << spec.d);
    wnum[b] = w.get_num().get_si();
    auto c = block_coords(spec, b);
    int s = 0;
    for (int x : c) s += x;
    parity[b] = s % 2;
  }
  auto faces = face_points(spec);
  const Rational a_units = ph.alpha * (1L << spec.d);
  const std::size_t np = std::size_t{1} << bits;
  ph.f.resize(np);
  ph.g.resize(np);
  ph.b0.resize(np);
  ph.bh.resize(np);
  for (std::size_t p = 0; p < np; ++p) {
    long we = 0, wo = 0;
    for (int b = 0; b < bits; ++b)
      if (p >> b & 1) (parity[b] ? wo : we) += wnum[b];
    ph.g[p] = static_cast<std::int8_t>((wo > we) - (wo < we));
    ph.b0[p] = Rational(std::min(we, wo)) >= a_units;
    std::uint32_t mask = 0;
    for (std::size_t k = 0; k < faces.size(); ++k) {
      long wh = 0;
      for (int b : faces[k])
        if (p >> b & 1) wh += wnum[b];
      if (Rational(wh) <= 2 * a_units) mask |= 1u << k;
    }
    ph.bh[p] = mask;
    ph.f[p] = ph.in_b(static_cast<std::uint32_t>(p)) ? 0 : ph.g[p];
  }
  return ph;
}

LocalObservable PhaseObservable::indicator_b() const {
  LocalObservable o{spec.block_bits(), std::vector<double>(f.size())};
  for (std::size_t p = 0; p < f.size(); ++p) o.table[p] = in_b(static_cast<std::uint32_t>(p));
  return o;
}

LocalObservable PhaseObservable::indicator_b0() const {
  LocalObservable o{spec.block_bits(), std::vector<double>(f.size())};
  for (std::size_t p = 0; p < f.size(); ++p) o.table[p] = b0[p];
  return o;
}

LocalObservable PhaseObservable::indicator_bh_eps(int face, int eps) const {
  LocalObservable o{spec.block_bits(), std::vector<double>(f.size())};
  for (std::size_t p = 0; p < f.size(); ++p) o.table[p] = ((bh[p] >> face) & 1) && g[p] == eps && !b0[p];
  return o;
}

LocalObservable PhaseObservable::as_local() const {
  LocalObservable o{spec.block_bits(), std::vector<double>(f.size())};
  for (std::size_t p = 0; p < f.size(); ++p) o.table[p] = f[p];
  return o;
}

CheckReport check_separator(const ChessContext& ctx, const PhaseObservable& ph, std::uint64_t sigma,
                            const std::vector<int>& s, const std::vector<int>& t) {
  int dist = 0;
  const int m = ctx.spec.per_axis();
  for (int k = 0; k < ctx.spec.d; ++k) {
    int diff = (((s[k] - t[k]) % m) + m) % m;
    dist += std::min(diff, m - diff);
  }
  if (dist != 1) throw std::invalid_argument("s and t are not nearest neighbours");
  int fs = ph.f[ctx.pattern(sigma, block_index(ctx.spec, s))];
  int ft = ph.f[ctx.pattern(sigma, block_index(ctx.spec, t))];
  auto r = le_report("separator", 0.0, static_cast<double>(fs * ft), 0.0);
  if (!r.pass) r.witness = "sigma mask " + std::to_string(sigma);
  return r;
}

CheckReport check_separator_exhaustive(const ChessContext& ctx, const PhaseObservable& ph) {
  const auto& spec = ctx.spec;
  const std::size_t k = ctx.elements.size();
  const int m = spec.per_axis();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < k; ++i) {
    auto s = unindex(i, m, spec.d);
    for (int a = 0; a < spec.d; ++a) {
      auto t = s;
      t[a] = (t[a] + 1) % m;
      pairs.emplace_back(i, block_index(spec, t));
    }
  }
  std::vector<std::uint64_t> bad(ctx.configs.size(), 0);
  chunked_sum(ctx.configs.size(), [&](std::size_t b, std::size_t e) {
    std::vector<int> vals(k);
    for (std::size_t i = b; i < e; ++i) {
      std::uint64_t sigma = ctx.configs[i];
      for (std::size_t t = 0; t < k; ++t) vals[t] = ph.f[ctx.pattern(sigma, t)];
      for (auto [x, y] : pairs)
        if (vals[x] * vals[y] < 0) bad[i] = 1;
    }
    return 0.0;
  });
  std::size_t violations = 0;
  std::string witness;
  for (std::size_t i = 0; i < bad.size(); ++i)
    if (bad[i]) {
      if (violations++ == 0) witness = "sigma mask " + std::to_string(ctx.configs[i]);
    }
  auto r = le_report("separator_exhaustive", static_cast<double>(violations), 0.0, 0.0);
  r.witness = witness;
  r.details["configurations"] = ctx.configs.size();
  r.details["pairs_per_configuration"] = pairs.size();
  r.details["alpha"] = ph.alpha.get_str();
  return r;
}

namespace {

// Counts by size of configurations where pred holds, and of all configurations.
std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>> signed_counts(
    const ChessContext& ctx, const std::function<int(std::uint64_t)>& value) {
  const std::size_t n = ctx.graph.vertex_count();
  std::vector<std::int64_t> v(n + 1, 0), all(n + 1, 0);
  for (auto sigma : ctx.configs) {
    int k = std::popcount(sigma);
    v[k] += value(sigma);
    ++all[k];
  }
  return {v, all};
}

Rational eval_poly(const std::vector<std::int64_t>& c, const Rational& lam) {
  Rational s = 0, p = 1;
  for (auto x : c) {
    s += Rational(static_cast<long>(x)) * p;
    p *= lam;
  }
  return s;
}

double log_poly(const std::vector<std::int64_t>& c, double lambda) {
  // nonnegative coefficients only
  std::vector<std::uint64_t> u(c.begin(), c.end());
  bool any = false;
  for (auto x : u) any = any || x > 0;
  if (!any) return -INFINITY;
  return partition_from_polynomial(u, FugacityParams::from_double(lambda), false).log_z;
}

}  // namespace

CheckReport check_f_expectation_zero(const ChessContext& ctx, const PhaseObservable& ph,
                                     const FugacityParams& lambda) {
  if (ctx.spec.ell % 2 == 0) throw std::invalid_argument("E f = 0 needs odd ell");
  auto [num, den] = signed_counts(ctx, [&](std::uint64_t s) { return ph.f[ctx.pattern(s, 0)]; });
  CheckReport r;
  if (lambda.exact) {
    Rational ef = eval_poly(num, *lambda.exact) / eval_poly(den, *lambda.exact);
    r = eq_report("f_expectation_zero", ef.get_d(), 0.0, 1e-10);
    r.details["exact"] = ef.get_str();
  } else {
    double zn = 0, zd = 0, p = 1;
    for (std::size_t k = 0; k < num.size(); ++k, p *= lambda.lambda) {
      zn += static_cast<double>(num[k]) * p;
      zd += static_cast<double>(den[k]) * p;
    }
    r = eq_report("f_expectation_zero", zn / zd, 0.0, 1e-10);
  }
  std::int64_t plus = 0, minus = 0;
  for (auto sigma : ctx.configs) {
    int v = ph.f[ctx.pattern(sigma, 0)];
    plus += v > 0;
    minus += v < 0;
  }
  r.details["count_plus"] = plus;
  r.details["count_minus"] = minus;
  r.details["lambda"] = lambda.label();
  return r;
}

CheckReport contour_probability_chain(const ChessContext& ctx, const PhaseObservable& ph,
                                      const FugacityParams& lambda,
                                      const std::vector<std::vector<int>>& blocks) {
  std::vector<std::size_t> taus;
  for (const auto& s : blocks) taus.push_back(block_index(ctx.spec, s));
  std::sort(taus.begin(), taus.end());
  taus.erase(std::unique(taus.begin(), taus.end()), taus.end());
  const double a = static_cast<double>(taus.size());
  const double dsize = static_cast<double>(ctx.elements.size());

  auto [event, all] = signed_counts(ctx, [&](std::uint64_t s) {
    for (auto t : taus)
      if (ph.f[ctx.pattern(s, t)] != 0) return 0;
    return 1;
  });
  auto [every, all2] = signed_counts(ctx, [&](std::uint64_t s) {
    for (std::size_t t = 0; t < ctx.elements.size(); ++t)
      if (ph.f[ctx.pattern(s, t)] != 0) return 0;
    return 1;
  });
  (void)all2;
  const double log_z = log_poly(all, lambda.lambda);
  const double log_event = log_poly(event, lambda.lambda);
  const double log_bnorm = log_poly(every, lambda.lambda) / dsize;
  const double log_one = log_z / dsize;
  const double lt = lambda.lambda_tilde;
  double ell_d = std::pow(static_cast<double>(ctx.spec.ell), ctx.spec.d);

  const double lhs = log_event - log_z;
  const double bterm = a > 0 ? a * log_bnorm : 0.0;
  const double mid = bterm + (dsize - a) * log_one - log_z;
  const double rhs = a > 0 ? a * (log_bnorm - ell_d / 2 * lt) : 0.0;
  CheckAccumulator acc("contour_probability_chain", 1e-12);
  auto fin = [](double x) { return std::isfinite(x) ? x : -1e300; };
  acc.add_le(fin(lhs), fin(mid), "probability vs chessboard estimate");
  acc.add_le(fin(mid), fin(rhs), "chessboard estimate vs trivial bound");
  auto r = acc.finish();
  r.lhs = std::exp(lhs);
  r.rhs = std::isfinite(rhs) ? std::exp(rhs) : 0.0;
  r.details["blocks"] = taus.size();
  r.details["log_probability"] = fin(lhs);
  r.details["log_middle"] = fin(mid);
  r.details["log_rhs"] = fin(rhs);
  if (lambda.exact) {
    Rational p = eval_poly(event, *lambda.exact) / eval_poly(all, *lambda.exact);
    r.details["probability_exact"] = p.get_str();
  }
  return r;
}

}  // namespace hclab
