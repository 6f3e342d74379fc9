#include "hclab/expansion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

namespace hclab {

// ---------------------------------------------------------------- Cheeger

CheegerResult cheeger_exact(const BipartiteGraph& g, std::size_t cap) {
  const std::size_t n = g.vertex_count();
  if (n > cap)
    throw PreconditionError("cheeger_exact refused: " + std::to_string(n) +
                            " vertices exceeds cap " + std::to_string(cap) +
                            "; use torus_cheeger_bound or another lower bound");
  if (n < 2) throw PreconditionError("cheeger_exact needs at least 2 vertices");
  if (!g.is_connected()) throw PreconditionError("cheeger_exact needs a connected graph");
  std::vector<std::uint64_t> nb(n);
  for (Vertex v = 0; v < n; ++v) nb[v] = g.neighbor_mask(v);

  std::uint64_t set = 0;
  long long boundary = 0;
  std::size_t size = 0;
  std::uint64_t best_set = 0;
  long long best_b = 0;
  std::size_t best_a = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t i = 1; i < total; ++i) {
    Vertex v = static_cast<Vertex>(std::countr_zero(i));  // Gray code flips bit v
    std::uint64_t bit = std::uint64_t{1} << v;
    long long inside = std::popcount(nb[v] & (set & ~bit));
    long long change = static_cast<long long>(g.degree(v)) - 2 * inside;
    if (set & bit) {
      set &= ~bit;
      boundary -= change;
      --size;
    } else {
      set |= bit;
      boundary += change;
      ++size;
    }
    if (2 * size > n) continue;
    if (best_a == 0 || boundary * static_cast<long long>(best_a) < best_b * static_cast<long long>(size)) {
      best_b = boundary;
      best_a = size;
      best_set = set;
    }
  }
  CheegerResult r;
  r.value = ratio(static_cast<long>(best_b), static_cast<unsigned long>(best_a));
  r.value.canonicalize();
  for (std::uint64_t m = best_set; m; m &= m - 1) r.witness.push_back(static_cast<Vertex>(std::countr_zero(m)));
  return r;
}

Rational torus_cheeger_bound(const TorusSpec& spec) {
  spec.validate();
  return ratio(1, static_cast<unsigned long>(spec.L));
}

// ---------------------------------------------------------------- sources

SubgraphSource single_edge_source(const BipartiteGraph& g) {
  SubgraphSource s;
  s.description = "single uniform edge";
  std::vector<WeightedSubgraph> support;
  const double p = 1.0 / static_cast<double>(g.edge_count());
  for (const auto& e : g.edges()) support.push_back({{e}, {e.u, e.v}, p});
  s.support = support;
  s.sampler = [support](std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, support.size() - 1);
    return support[pick(rng)];
  };
  return s;
}

namespace {

WeightedSubgraph image_of(const TorusSpec& spec, const TorusAutomorphism& a,
                          const std::vector<Edge>& edges, const std::vector<Vertex>& vertices) {
  WeightedSubgraph w;
  for (const auto& e : edges) {
    Vertex x = a.apply(spec, e.u), y = a.apply(spec, e.v);
    w.edges.push_back({std::min(x, y), std::max(x, y)});
  }
  for (Vertex v : vertices) w.vertices.push_back(a.apply(spec, v));
  std::sort(w.edges.begin(), w.edges.end());
  std::sort(w.vertices.begin(), w.vertices.end());
  return w;
}

}  // namespace

SubgraphSource torus_orbit_source(const TorusSpec& spec, const std::vector<Edge>& tree_edges,
                                  const std::vector<Vertex>& tree_vertices) {
  SubgraphSource s;
  s.description = "dominating tree under a uniform torus automorphism";
  auto autos = all_torus_automorphisms(spec);
  if (autos.size() <= 400000) {
    // Merge equal images so the support stays small.
    std::map<std::pair<std::vector<Edge>, std::vector<Vertex>>, double> merged;
    const double p = 1.0 / static_cast<double>(autos.size());
    for (const auto& a : autos) {
      auto w = image_of(spec, a, tree_edges, tree_vertices);
      merged[{w.edges, w.vertices}] += p;
    }
    std::vector<WeightedSubgraph> support;
    for (auto& [k, p2] : merged) support.push_back({k.first, k.second, p2});
    s.support = std::move(support);
  }
  s.sampler = [spec, tree_edges, tree_vertices](std::mt19937_64& rng) {
    return image_of(spec, sample_torus_automorphism(spec, rng), tree_edges, tree_vertices);
  };
  return s;
}

SubgraphSource walk_trace_source(const BipartiteGraph& g, int m0) {
  if (m0 < 1) throw std::invalid_argument("walk length must be >= 1");
  SubgraphSource s;
  s.description = "simple random walk trace of " + std::to_string(m0) + " vertices";
  const std::size_t n = g.vertex_count();
  const double delta = static_cast<double>(g.delta());
  if (static_cast<double>(n) * std::pow(delta, m0 - 1) <= 2e5) {
    std::map<std::pair<std::vector<Edge>, std::vector<Vertex>>, double> merged;
    std::vector<Vertex> path;
    std::function<void(double)> rec = [&](double p) {
      if (static_cast<int>(path.size()) == m0) {
        std::vector<Edge> edges;
        for (std::size_t i = 0; i + 1 < path.size(); ++i)
          edges.push_back({std::min(path[i], path[i + 1]), std::max(path[i], path[i + 1])});
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        std::vector<Vertex> verts(path);
        std::sort(verts.begin(), verts.end());
        verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
        merged[{edges, verts}] += p;
        return;
      }
      for (Vertex u : g.neighbors(path.back())) {
        path.push_back(u);
        rec(p / delta);
        path.pop_back();
      }
    };
    for (Vertex v = 0; v < n; ++v) {
      path = {v};
      rec(1.0 / static_cast<double>(n));
    }
    std::vector<WeightedSubgraph> support;
    for (auto& [k, p] : merged) support.push_back({k.first, k.second, p});
    s.support = std::move(support);
  }
  s.sampler = [graph = g, m0](std::mt19937_64& rng) {
    const BipartiteGraph* gp = &graph;
    std::uniform_int_distribution<Vertex> start(0, static_cast<Vertex>(gp->vertex_count() - 1));
    std::vector<Vertex> path{start(rng)};
    while (static_cast<int>(path.size()) < m0) {
      auto nb = gp->neighbors(path.back());
      std::uniform_int_distribution<std::size_t> pick(0, nb.size() - 1);
      path.push_back(nb[pick(rng)]);
    }
    WeightedSubgraph w;
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
      w.edges.push_back({std::min(path[i], path[i + 1]), std::max(path[i], path[i + 1])});
    std::sort(w.edges.begin(), w.edges.end());
    w.edges.erase(std::unique(w.edges.begin(), w.edges.end()), w.edges.end());
    w.vertices = path;
    std::sort(w.vertices.begin(), w.vertices.end());
    w.vertices.erase(std::unique(w.vertices.begin(), w.vertices.end()), w.vertices.end());
    return w;
  };
  return s;
}

LocalExpansionCertificate torus_local_expansion_certificate(const TorusSpec& spec) {
  spec.validate();
  auto g = build_torus(spec);
  auto dom = dominating_set_torus(spec);
  auto tree = dominating_tree(g, dom.vertices);
  LocalExpansionCertificate c;
  c.c_le = 12;
  c.m_le = ratio(6 * static_cast<long>(spec.vertex_count()), static_cast<unsigned long>(spec.d));
  c.m_le.canonicalize();
  c.source = torus_orbit_source(spec, tree.edges, tree.vertices);
  return c;
}

// ---------------------------------------------------------------- verification

WilsonInterval wilson_interval(std::size_t hits, std::size_t trials, double z) {
  if (trials == 0) return {};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

CheckReport verify_local_expansion(const BipartiteGraph& g, const LocalExpansionCertificate& cert,
                                   VerifyMode mode, std::size_t samples, std::uint64_t seed) {
  const std::size_t n = g.vertex_count();
  const std::size_t m = g.edge_count();
  const double delta = static_cast<double>(g.delta());
  const double m_le = cert.m_le.get_d();
  const double item2_bound = delta * m_le / cert.c_le.get_d();
  std::map<Edge, std::size_t> edge_index;
  for (std::size_t i = 0; i < m; ++i) edge_index[g.edges()[i]] = i;

  // Per-edge inclusion and per-vertex "neighbourhood meets V(T)" tallies.
  std::vector<double> edge_p(m, 0.0), hit_p(n, 0.0);
  auto tally = [&](const WeightedSubgraph& w, double weight) {
    for (const auto& e : w.edges) {
      auto it = edge_index.find(e);
      if (it == edge_index.end()) throw std::invalid_argument("subgraph edge not in graph");
      edge_p[it->second] += weight;
    }
    std::vector<char> in_t(n, 0);
    for (Vertex v : w.vertices) in_t[v] = 1;
    for (Vertex v = 0; v < n; ++v) {
      bool hit = false;
      for (Vertex u : g.neighbors(v)) hit = hit || in_t[u];
      if (hit) hit_p[v] += weight;
    }
  };

  CheckReport r;
  r.id = "local_expansion";
  r.tolerance = 1e-12;
  r.details["C_LE"] = cert.c_le.get_str();
  r.details["M_LE"] = cert.m_le.get_str();
  r.details["source"] = cert.source.description;
  if (mode == VerifyMode::Exact) {
    if (!cert.source.support)
      throw PreconditionError("exact verification needs an enumerable subgraph distribution");
    for (const auto& w : *cert.source.support) tally(w, w.prob);
    r.details["mode"] = "exact";
    r.details["support_size"] = cert.source.support->size();
  } else {
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < samples; ++i) tally(cert.source.sampler(rng), 1.0);
    r.details["mode"] = "montecarlo";
    r.details["samples"] = samples;
  }

  // item 1: |E| P(e) <= M_LE ; item 2: |V| P(hit) >= delta M_LE / C_LE
  double worst1 = 1e300, worst2 = 1e300;
  std::size_t arg1 = 0, arg2 = 0;
  bool certified = true;
  for (std::size_t i = 0; i < m; ++i) {
    double value;
    if (mode == VerifyMode::Exact) {
      value = static_cast<double>(m) * edge_p[i];
    } else {
      auto ci = wilson_interval(static_cast<std::size_t>(edge_p[i]), samples);
      value = static_cast<double>(m) * ci.low;
      certified = certified && static_cast<double>(m) * ci.high <= m_le;
    }
    double margin = m_le - value;
    if (margin < worst1) {
      worst1 = margin;
      arg1 = i;
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    double value;
    if (mode == VerifyMode::Exact) {
      value = static_cast<double>(n) * hit_p[v];
    } else {
      auto ci = wilson_interval(static_cast<std::size_t>(hit_p[v]), samples);
      value = static_cast<double>(n) * ci.high;
      certified = certified && static_cast<double>(n) * ci.low >= item2_bound;
    }
    double margin = value - item2_bound;
    if (margin < worst2) {
      worst2 = margin;
      arg2 = v;
    }
  }
  const double tol_scale = std::max(1.0, m_le);
  r.tolerance = 1e-12 * tol_scale;
  r.margin = std::min(worst1, worst2);
  r.pass = worst1 >= -r.tolerance && worst2 >= -r.tolerance;
  const auto& we = g.edges()[arg1];
  r.details["item1_worst_margin"] = worst1;
  r.details["item1_worst_edge"] = {we.u, we.v};
  r.details["item2_worst_margin"] = worst2;
  r.details["item2_worst_vertex"] = arg2;
  if (mode == VerifyMode::MonteCarlo) r.details["certified"] = certified;
  if (worst1 <= worst2) {
    r.lhs = m_le - worst1;
    r.rhs = m_le;
    r.witness = "edge " + std::to_string(we.u) + "-" + std::to_string(we.v);
  } else {
    r.lhs = item2_bound;
    r.rhs = item2_bound + worst2;
    r.witness = "vertex " + std::to_string(arg2);
  }
  return r;
}

// ---------------------------------------------------------------- Green function

GreenTable green_table(const BipartiteGraph& g, int m0) {
  if (m0 < 1) throw std::invalid_argument("M0 must be >= 1");
  const std::size_t n = g.vertex_count();
  const std::size_t delta = g.delta();
  GreenTable t;
  t.m0 = m0;
  t.n = n;
  if (n <= 32) {
    // Integer walk counts A^i, scaled by delta^(M0-1-i) to a common denominator.
    std::vector<BigInt> power(n * n, 0), acc(n * n, 0), next(n * n);
    for (std::size_t v = 0; v < n; ++v) power[v * n + v] = 1;
    BigInt denom;
    mpz_ui_pow_ui(denom.get_mpz_t(), delta, static_cast<unsigned long>(m0 - 1));
    BigInt scale = denom;
    for (int i = 0; i < m0; ++i) {
      for (std::size_t k = 0; k < n * n; ++k) acc[k] += power[k] * scale;
      if (i + 1 == m0) break;
      scale /= static_cast<unsigned long>(delta);
      for (std::size_t u = 0; u < n; ++u)
        for (std::size_t w = 0; w < n; ++w) {
          BigInt s = 0;
          for (Vertex x : g.neighbors(static_cast<Vertex>(w))) s += power[u * n + x];
          next[u * n + w] = s;
        }
      std::swap(power, next);
    }
    t.exact.resize(n * n);
    t.approx.resize(n * n);
    for (std::size_t k = 0; k < n * n; ++k) {
      t.exact[k] = ratio(acc[k], denom);
      t.exact[k].canonicalize();
      t.approx[k] = t.exact[k].get_d();
    }
    return t;
  }
  std::vector<double> power(n * n, 0.0), next(n * n);
  t.approx.assign(n * n, 0.0);
  for (std::size_t v = 0; v < n; ++v) power[v * n + v] = 1.0;
  for (int i = 0; i < m0; ++i) {
    for (std::size_t k = 0; k < n * n; ++k) t.approx[k] += power[k];
    if (i + 1 == m0) break;
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t w = 0; w < n; ++w) {
        double s = 0.0;
        for (Vertex x : g.neighbors(static_cast<Vertex>(w))) s += power[u * n + x];
        next[u * n + w] = s / static_cast<double>(delta);
      }
    std::swap(power, next);
  }
  return t;
}

CheckReport check_green_positivity(const GreenTable& t, const BipartiteGraph& g) {
  CheckAccumulator acc("green_positivity", t.has_exact() ? 0.0 : 1e-12);
  for (Vertex u = 0; u < t.n; ++u) {
    for (Vertex w = u + 1; w < t.n; ++w) {
      if (g.parity(u) != g.parity(w)) continue;
      std::string wit = std::to_string(u) + "," + std::to_string(w);
      if (t.has_exact()) {
        Rational guw = t.exact_value(u, w);
        Rational rhs = (t.exact_value(u, u) - 1) * (t.exact_value(w, w) - 1);
        acc.add_exact(guw * guw <= rhs, Rational(guw * guw).get_d(), rhs.get_d(), wit);
      } else {
        double guw = t.value(u, w);
        double rhs = (t.value(u, u) - 1) * (t.value(w, w) - 1);
        double scale = std::max(1.0, std::fabs(rhs));
        acc.add_le(guw * guw / scale, rhs / scale, wit);
      }
    }
  }
  auto r = acc.finish();
  r.details["M0"] = t.m0;
  r.details["quantity"] = "g_uw^2 <= (g_uu - 1)(g_ww - 1)";
  return r;
}

Rational walk_hit_probability(const BipartiteGraph& g, int m0, const std::vector<Vertex>& target) {
  const std::size_t n = g.vertex_count();
  const Rational step = ratio(1, static_cast<unsigned long>(g.delta()));
  std::vector<char> absorb(n, 0);
  for (Vertex v : target) absorb[v] = 1;
  std::vector<Rational> q(n, 0), next(n);
  for (Vertex v = 0; v < n; ++v)
    if (!absorb[v]) q[v] = ratio(1, static_cast<unsigned long>(n));
  for (int i = 1; i < m0; ++i) {
    for (Vertex y = 0; y < n; ++y) {
      next[y] = 0;
      if (absorb[y]) continue;
      for (Vertex x : g.neighbors(y)) next[y] += q[x];
      next[y] *= step;
    }
    std::swap(q, next);
  }
  Rational avoid = 0;
  for (const auto& x : q) avoid += x;
  return 1 - avoid;
}

Rational walk_edge_probability(const BipartiteGraph& g, int m0, const Edge& e) {
  const std::size_t n = g.vertex_count();
  const Rational step = ratio(1, static_cast<unsigned long>(g.delta()));
  // probability mass of walks that have not used e yet, by current vertex
  std::vector<Rational> q(n, ratio(1, static_cast<unsigned long>(n))), next(n);
  for (int i = 1; i < m0; ++i) {
    for (Vertex y = 0; y < n; ++y) {
      next[y] = 0;
      for (Vertex x : g.neighbors(y)) {
        bool uses = (x == e.u && y == e.v) || (x == e.v && y == e.u);
        if (!uses) next[y] += q[x];
      }
      next[y] *= step;
    }
    std::swap(q, next);
  }
  Rational clean = 0;
  for (const auto& x : q) clean += x;
  return 1 - clean;
}

WalkCertificate local_expansion_from_walk(const BipartiteGraph& g, int m0, const Rational& c0) {
  const std::size_t n = g.vertex_count();
  if (n > 32) throw PreconditionError("walk certificate uses exact arithmetic up to 32 vertices");
  const std::size_t delta = g.delta();
  auto table = green_table(g, m0);
  const Rational allowed = (c0 - 1) / Rational(static_cast<unsigned long>(delta));
  WalkCertificate out;
  {
    CheckAccumulator acc("walk_return_premise", 0.0);
    Rational worst_excess;
    Vertex worst_v = 0;
    bool have = false;
    for (Vertex v = 0; v < n; ++v) {
      Rational ret = table.exact_value(v, v) - 1;
      acc.add_exact(ret <= allowed, ret.get_d(), allowed.get_d(), "vertex " + std::to_string(v));
      if (!have || ret - allowed > worst_excess) {
        worst_excess = ret - allowed;
        worst_v = v;
        have = true;
      }
    }
    out.premise = acc.finish();
    if (!out.premise.pass)
      throw PreconditionError("walk premise fails at vertex " + std::to_string(worst_v) +
                              ": g_vv - 1 exceeds (C0 - 1)/delta by " + worst_excess.get_str());
  }
  {
    const Rational bound = Rational(m0) / c0 * ratio(static_cast<unsigned long>(delta), static_cast<unsigned long>(n));
    CheckAccumulator acc("walk_path_vert", 0.0);
    for (Vertex v = 0; v < n; ++v) {
      std::vector<Vertex> nb(g.neighbors(v).begin(), g.neighbors(v).end());
      Rational hit = walk_hit_probability(g, m0, nb);
      acc.add_exact(hit >= bound, bound.get_d(), hit.get_d(), "vertex " + std::to_string(v));
    }
    out.path_vert = acc.finish();
    out.path_vert.details["bound"] = bound.get_str();
  }
  {
    const Rational bound = ratio(m0, static_cast<unsigned long>(g.edge_count()));
    CheckAccumulator acc("walk_edge_union_bound", 0.0);
    for (const auto& e : g.edges()) {
      Rational p = walk_edge_probability(g, m0, e);
      acc.add_exact(p <= bound, p.get_d(), bound.get_d(),
                    "edge " + std::to_string(e.u) + "-" + std::to_string(e.v));
    }
    out.edge_union = acc.finish();
  }
  out.cert.c_le = c0;
  out.cert.m_le = m0;
  out.cert.source = walk_trace_source(g, m0);
  return out;
}

}  // namespace hclab
