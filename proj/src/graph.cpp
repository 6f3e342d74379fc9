#include "hclab/graph.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

namespace hclab {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

BipartiteGraph BipartiteGraph::from_edges(std::size_t n, std::vector<Edge> edges,
                                          std::optional<std::vector<Parity>> parity) {
  BipartiteGraph g;
  for (auto& e : edges) {
    if (e.u == e.v) throw GraphError("self-loop at vertex " + std::to_string(e.u));
    if (e.u >= n || e.v >= n) throw GraphError("edge endpoint out of range");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i] == edges[i - 1]) {
      throw GraphError("duplicate edge " + std::to_string(edges[i].u) + " " +
                       std::to_string(edges[i].v));
    }
  }
  if (parity) {
    if (parity->size() != n) throw GraphError("parity vector has wrong length");
    for (const auto& e : edges) {
      if ((*parity)[e.u] == (*parity)[e.v]) {
        throw GraphError("edge " + std::to_string(e.u) + " " + std::to_string(e.v) +
                         " joins two vertices of the same class");
      }
    }
    g.parity_ = std::move(*parity);
  }
  g.adj_.assign(n, {});
  for (const auto& e : edges) {
    g.adj_[e.u].push_back(e.v);
    g.adj_[e.v].push_back(e.u);
  }
  for (auto& a : g.adj_) std::sort(a.begin(), a.end());
  g.edges_ = std::move(edges);
  if (n <= 64) {
    g.masks_.assign(n, 0);
    for (std::size_t v = 0; v < n; ++v)
      for (Vertex u : g.adj_[v]) g.masks_[v] |= std::uint64_t{1} << u;
  }
  if (n > 0) {
    std::size_t d0 = g.adj_[0].size();
    bool reg = std::all_of(g.adj_.begin(), g.adj_.end(),
                           [&](const auto& a) { return a.size() == d0; });
    if (reg) g.regular_ = d0;
  }
  return g;
}

bool BipartiteGraph::adjacent(Vertex u, Vertex v) const {
  const auto& a = adj_[u];
  return std::binary_search(a.begin(), a.end(), v);
}

std::size_t BipartiteGraph::delta() const {
  if (!regular_) throw GraphError("graph is not regular");
  return *regular_;
}

Parity BipartiteGraph::parity(Vertex v) const {
  if (parity_.empty()) throw GraphError("graph carries no bipartition labels");
  return parity_[v];
}

std::vector<Vertex> BipartiteGraph::even_vertices() const {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < vertex_count(); ++v)
    if (parity(v) == Parity::Even) out.push_back(v);
  return out;
}

std::vector<Vertex> BipartiteGraph::odd_vertices() const {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < vertex_count(); ++v)
    if (parity(v) == Parity::Odd) out.push_back(v);
  return out;
}

std::uint64_t BipartiteGraph::class_mask(Parity p) const {
  if (vertex_count() > 64) throw GraphError("class_mask needs at most 64 vertices");
  std::uint64_t m = 0;
  for (Vertex v = 0; v < vertex_count(); ++v)
    if (parity(v) == p) m |= std::uint64_t{1} << v;
  return m;
}

bool BipartiteGraph::is_connected() const {
  if (adj_.empty()) return true;
  std::vector<char> seen(adj_.size(), 0);
  std::deque<Vertex> q{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!q.empty()) {
    Vertex v = q.front();
    q.pop_front();
    for (Vertex u : adj_[v]) {
      if (!seen[u]) {
        seen[u] = 1;
        ++count;
        q.push_back(u);
      }
    }
  }
  return count == adj_.size();
}

std::optional<std::vector<Parity>> BipartiteGraph::two_coloring() const {
  const std::size_t n = adj_.size();
  std::vector<int> color(n, -1);
  for (Vertex s = 0; s < n; ++s) {
    if (color[s] >= 0) continue;
    color[s] = 0;
    std::deque<Vertex> q{s};
    while (!q.empty()) {
      Vertex v = q.front();
      q.pop_front();
      for (Vertex u : adj_[v]) {
        if (color[u] < 0) {
          color[u] = 1 - color[v];
          q.push_back(u);
        } else if (color[u] == color[v]) {
          return std::nullopt;
        }
      }
    }
  }
  std::vector<Parity> out(n);
  for (std::size_t v = 0; v < n; ++v) out[v] = color[v] ? Parity::Odd : Parity::Even;
  return out;
}

BipartiteGraph BipartiteGraph::with_bfs_parity() const {
  auto c = two_coloring();
  if (!c) throw GraphError("graph is not bipartite");
  return from_edges(vertex_count(), edges_, std::move(c));
}

// ---------------------------------------------------------------- tori

std::size_t TorusSpec::vertex_count() const {
  std::size_t n = 1;
  for (int i = 0; i < d; ++i) n *= static_cast<std::size_t>(L);
  return n;
}

void TorusSpec::validate() const {
  if (L < 2) throw GraphError("torus side L must be >= 2");
  if (d < 1) throw GraphError("torus dimension d must be >= 1");
}

std::vector<int> TorusSpec::coords(Vertex v) const {
  std::vector<int> c(d);
  for (int i = d - 1; i >= 0; --i) {
    c[i] = static_cast<int>(v % L);
    v /= L;
  }
  return c;
}

Vertex TorusSpec::index(std::span<const int> c) const {
  Vertex v = 0;
  for (int i = 0; i < d; ++i) v = v * L + static_cast<Vertex>(((c[i] % L) + L) % L);
  return v;
}

BipartiteGraph build_torus(const TorusSpec& spec) {
  spec.validate();
  const std::size_t n = spec.vertex_count();
  std::set<Edge> edges;
  for (Vertex v = 0; v < n; ++v) {
    auto c = spec.coords(v);
    for (int i = 0; i < spec.d; ++i) {
      auto w = c;
      w[i] += 1;
      Vertex u = spec.index(w);
      edges.insert(Edge{std::min(u, v), std::max(u, v)});
    }
  }
  std::optional<std::vector<Parity>> parity;
  if (spec.L % 2 == 0) {
    parity.emplace(n);
    for (Vertex v = 0; v < n; ++v) {
      auto c = spec.coords(v);
      int s = std::accumulate(c.begin(), c.end(), 0);
      (*parity)[v] = (s % 2) ? Parity::Odd : Parity::Even;
    }
  }
  return BipartiteGraph::from_edges(n, {edges.begin(), edges.end()}, std::move(parity));
}

BipartiteGraph build_cycle(int n) { return build_torus({n, 1}); }
BipartiteGraph build_hypercube(int d) { return build_torus({2, d}); }

BipartiteGraph complete_bipartite(int a, int b) {
  std::vector<Edge> edges;
  std::vector<Parity> parity(a + b, Parity::Even);
  for (int j = 0; j < b; ++j) parity[a + j] = Parity::Odd;
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) edges.push_back({Vertex(i), Vertex(a + j)});
  return BipartiteGraph::from_edges(a + b, std::move(edges), std::move(parity));
}

BipartiteGraph random_regular_bipartite(int half, int delta, std::mt19937_64& rng) {
  if (delta < 1 || delta > half) throw GraphError("need 1 <= delta <= half");
  std::vector<Parity> parity(2 * half, Parity::Even);
  for (int j = 0; j < half; ++j) parity[half + j] = Parity::Odd;
  for (int attempt = 0; attempt < 100000; ++attempt) {
    std::set<Edge> edges;
    bool ok = true;
    std::vector<int> perm(half);
    for (int k = 0; k < delta && ok; ++k) {
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      for (int i = 0; i < half; ++i) {
        if (!edges.insert(Edge{Vertex(i), Vertex(half + perm[i])}).second) {
          ok = false;
          break;
        }
      }
    }
    if (ok) return BipartiteGraph::from_edges(2 * half, {edges.begin(), edges.end()}, parity);
  }
  throw GraphError("failed to sample a regular bipartite graph");
}

// ---------------------------------------------------------------- codes

int hamming_distance(std::uint32_t a, std::uint32_t b) { return std::popcount(a ^ b); }

std::vector<std::uint32_t> hamming_code(int r) {
  if (r < 1 || r > 4) throw GraphError("hamming_code supports 1 <= r <= 4");
  const int len = (1 << r) - 1;
  // Column i of the parity-check matrix is the binary expansion of i + 1, so
  // the syndrome of a word is the xor of (i + 1) over its set bits.
  std::vector<std::uint32_t> code;
  for (std::uint32_t w = 0; w < (std::uint32_t{1} << len); ++w) {
    std::uint32_t syn = 0;
    for (int i = 0; i < len; ++i)
      if (w >> i & 1) syn ^= static_cast<std::uint32_t>(i + 1);
    if (syn == 0) code.push_back(w);
  }
  return code;
}

bool is_dominating(const BipartiteGraph& g, std::span<const Vertex> set) {
  std::vector<char> covered(g.vertex_count(), 0);
  for (Vertex v : set) {
    covered[v] = 1;
    for (Vertex u : g.neighbors(v)) covered[u] = 1;
  }
  return std::all_of(covered.begin(), covered.end(), [](char c) { return c != 0; });
}

DominatingSet dominating_set_torus(const TorusSpec& spec) {
  spec.validate();
  int r = 1;
  while ((1 << (r + 1)) - 1 <= spec.d) ++r;
  const int len = (1 << r) - 1;
  const auto code = hamming_code(r);
  std::vector<char> in_code(std::size_t{1} << len, 0);
  for (auto c : code) in_code[c] = 1;

  const std::size_t n = spec.vertex_count();
  auto lift = [&](std::uint32_t b) {
    std::vector<Vertex> out;
    for (Vertex v = 0; v < n; ++v) {
      auto c = spec.coords(v);
      std::uint32_t w = 0;
      for (int i = 0; i < len; ++i)
        if (c[i] % 2) w |= std::uint32_t{1} << i;
      if (in_code[w ^ b]) out.push_back(v);
    }
    return out;
  };

  DominatingSet best;
  best.code_length = len;
  if (spec.L % 2 == 0) {
    best.vertices = lift(0);
    return best;
  }
  // Odd L: the shifted lifts have different sizes. Take the smallest, first
  // in lexicographic order of b on ties.
  bool found = false;
  for (std::uint32_t b = 0; b < (std::uint32_t{1} << len); ++b) {
    auto cand = lift(b);
    if (!found || cand.size() < best.vertices.size()) {
      best.vertices = std::move(cand);
      best.shift = b;
      found = true;
    }
  }
  return best;
}

// ---------------------------------------------------------------- trees

namespace {

// BFS from s exploring neighbours in increasing order; parent of the first
// discovery wins, which gives lexicographically smallest shortest paths.
std::vector<int> bfs_parents(const BipartiteGraph& g, Vertex s, std::vector<int>* dist,
                             int max_dist = -1) {
  const std::size_t n = g.vertex_count();
  std::vector<int> parent(n, -1);
  std::vector<int> d(n, -1);
  d[s] = 0;
  std::deque<Vertex> q{s};
  while (!q.empty()) {
    Vertex v = q.front();
    q.pop_front();
    if (max_dist >= 0 && d[v] >= max_dist) continue;
    for (Vertex u : g.neighbors(v)) {
      if (d[u] < 0) {
        d[u] = d[v] + 1;
        parent[u] = static_cast<int>(v);
        q.push_back(u);
      }
    }
  }
  if (dist) *dist = std::move(d);
  return parent;
}

}  // namespace

bool TreeSubgraph::is_tree_in(const BipartiteGraph& g) const {
  if (edges.empty() || edges.size() + 1 != vertices.size()) return false;
  if (!std::is_sorted(vertices.begin(), vertices.end())) return false;
  if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end()) return false;
  auto pos = [&](Vertex v) -> int {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
    if (it == vertices.end() || *it != v) return -1;
    return static_cast<int>(it - vertices.begin());
  };
  // union-find over tree vertices; a cycle or a missing vertex fails
  std::vector<int> uf(vertices.size());
  std::iota(uf.begin(), uf.end(), 0);
  auto find = [&](int x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  for (const auto& e : edges) {
    if (e.u >= g.vertex_count() || e.v >= g.vertex_count() || !g.adjacent(e.u, e.v)) return false;
    int a = pos(e.u), b = pos(e.v);
    if (a < 0 || b < 0) return false;
    a = find(a);
    b = find(b);
    if (a == b) return false;
    uf[a] = b;
  }
  return pos(root) >= 0;
}

TreeSubgraph dominating_tree(const BipartiteGraph& g, std::span<const Vertex> dom) {
  if (dom.empty()) throw GraphError("dominating set is empty");
  if (!g.is_connected()) throw GraphError("graph is disconnected");
  if (!is_dominating(g, dom)) throw GraphError("vertex set is not dominating");
  std::vector<Vertex> D(dom.begin(), dom.end());
  std::sort(D.begin(), D.end());
  D.erase(std::unique(D.begin(), D.end()), D.end());

  const std::size_t n = g.vertex_count();
  std::set<Edge> union_edges;
  std::set<Vertex> union_vertices(D.begin(), D.end());

  // Spanning tree of the "distance <= 3" graph on D, grown by BFS from D[0].
  std::vector<char> in_d(n, 0);
  for (Vertex v : D) in_d[v] = 1;
  std::vector<char> reached(n, 0);
  std::deque<Vertex> q{D[0]};
  reached[D[0]] = 1;
  std::size_t reached_count = 1;
  while (!q.empty()) {
    Vertex a = q.front();
    q.pop_front();
    std::vector<int> dist;
    auto parent = bfs_parents(g, a, &dist, 3);
    for (Vertex b : D) {
      if (reached[b] || dist[b] < 0) continue;
      reached[b] = 1;
      ++reached_count;
      q.push_back(b);
      for (Vertex x = b; x != a; x = static_cast<Vertex>(parent[x])) {
        Vertex p = static_cast<Vertex>(parent[x]);
        union_edges.insert(Edge{std::min(x, p), std::max(x, p)});
        union_vertices.insert(x);
        union_vertices.insert(p);
      }
    }
  }
  if (reached_count != D.size()) throw GraphError("dominating set is not 3-connected");

  TreeSubgraph t;
  if (union_edges.empty()) {
    // Single dominating vertex: hang its smallest neighbour off it.
    Vertex v = D[0];
    if (g.degree(v) == 0) throw GraphError("isolated vertex");
    Vertex u = g.neighbors(v)[0];
    t.vertices = {std::min(u, v), std::max(u, v)};
    t.edges = {Edge{std::min(u, v), std::max(u, v)}};
    t.root = t.vertices[0];
    return t;
  }

  // Final spanning tree of the union by BFS from its smallest vertex.
  std::vector<Edge> ue(union_edges.begin(), union_edges.end());
  std::vector<Vertex> uv(union_vertices.begin(), union_vertices.end());
  auto sub = BipartiteGraph::from_edges(n, ue);
  std::vector<int> dist;
  auto parent = bfs_parents(sub, uv[0], &dist);
  for (Vertex v : uv) {
    if (v == uv[0]) continue;
    if (parent[v] < 0) throw GraphError("path union is disconnected");
    Vertex p = static_cast<Vertex>(parent[v]);
    t.edges.push_back(Edge{std::min(v, p), std::max(v, p)});
  }
  std::sort(t.edges.begin(), t.edges.end());
  t.vertices = std::move(uv);
  t.root = t.vertices[0];
  return t;
}

// ---------------------------------------------------------------- automorphisms

TorusAutomorphism TorusAutomorphism::identity(int d) {
  TorusAutomorphism a;
  a.translation.assign(d, 0);
  a.permutation.resize(d);
  std::iota(a.permutation.begin(), a.permutation.end(), 0);
  a.flips.assign(d, 1);
  return a;
}

Vertex TorusAutomorphism::apply(const TorusSpec& spec, Vertex v) const {
  auto c = spec.coords(v);
  std::vector<int> out(spec.d);
  for (int i = 0; i < spec.d; ++i) out[i] = flips[i] * c[permutation[i]] + translation[i];
  return spec.index(out);
}

TorusAutomorphism sample_torus_automorphism(const TorusSpec& spec, std::mt19937_64& rng) {
  auto a = TorusAutomorphism::identity(spec.d);
  std::uniform_int_distribution<int> coord(0, spec.L - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int i = 0; i < spec.d; ++i) a.translation[i] = coord(rng);
  std::shuffle(a.permutation.begin(), a.permutation.end(), rng);
  for (int i = 0; i < spec.d; ++i) a.flips[i] = coin(rng) ? -1 : 1;
  return a;
}

std::vector<TorusAutomorphism> all_torus_automorphisms(const TorusSpec& spec) {
  std::vector<TorusAutomorphism> out;
  auto base = TorusAutomorphism::identity(spec.d);
  std::vector<int> perm = base.permutation;
  do {
    for (std::uint32_t f = 0; f < (1u << spec.d); ++f) {
      for (Vertex t = 0; t < spec.vertex_count(); ++t) {
        TorusAutomorphism a;
        a.permutation = perm;
        a.translation = spec.coords(t);
        a.flips.resize(spec.d);
        for (int i = 0; i < spec.d; ++i) a.flips[i] = (f >> i & 1) ? -1 : 1;
        out.push_back(std::move(a));
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

// ---------------------------------------------------------------- gadgets

Gadget build_linear_gadget(int m) {
  if (m < 1) throw GraphError("gadget needs m >= 1");
  // Layout: 0 = left endpoint, block i uses 1+6i .. 6+6i as x,a,b,c,d,y,
  // 6m+1 = right endpoint.
  std::vector<Edge> edges;
  auto x = [](int i) { return Vertex(1 + 6 * i); };
  for (int i = 0; i < m; ++i) {
    Vertex xv = x(i), a = xv + 1, b = xv + 2, c = xv + 3, d = xv + 4, y = xv + 5;
    edges.insert(edges.end(), {{xv, a}, {xv, b}, {a, c}, {a, d}, {b, c}, {b, d}, {c, y}, {d, y}});
    if (i + 1 < m) edges.push_back({y, x(i + 1)});
  }
  const Vertex right = Vertex(6 * m + 1);
  edges.push_back({0, x(0)});
  edges.push_back({Vertex(6 * m), right});
  Gadget out;
  out.graph = BipartiteGraph::from_edges(6 * m + 2, std::move(edges)).with_bfs_parity();
  out.left = 0;
  out.right = right;
  return out;
}

BipartiteGraph blow_up(const BipartiteGraph& g, int m) {
  if (m < 1) throw GraphError("blow-up needs m >= 1");
  const std::size_t n = g.vertex_count();
  std::vector<Edge> edges;
  for (const auto& e : g.edges())
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) edges.push_back({Vertex(e.u * m + i), Vertex(e.v * m + j)});
  std::optional<std::vector<Parity>> parity;
  if (g.has_parity()) {
    parity.emplace(n * m);
    for (std::size_t v = 0; v < n; ++v)
      for (int i = 0; i < m; ++i) (*parity)[v * m + i] = g.parity(Vertex(v));
  }
  return BipartiteGraph::from_edges(n * m, std::move(edges), std::move(parity));
}

BipartiteGraph stretch_by_gadget(const BipartiteGraph& h, int m) {
  if (h.regular_degree() != std::optional<std::size_t>{3})
    throw GraphError("stretch needs a 3-regular graph");
  if (!h.two_coloring()) throw GraphError("stretch needs a bipartite graph");
  const auto gad = build_linear_gadget(m);
  const std::size_t inner = 6 * static_cast<std::size_t>(m);
  std::vector<Edge> edges;
  Vertex next = static_cast<Vertex>(h.vertex_count());
  for (const auto& e : h.edges()) {
    auto map = [&](Vertex x) -> Vertex {
      if (x == gad.left) return e.u;
      if (x == gad.right) return e.v;
      return next + x - 1;
    };
    for (const auto& ge : gad.graph.edges()) edges.push_back({map(ge.u), map(ge.v)});
    next += static_cast<Vertex>(inner);
  }
  return BipartiteGraph::from_edges(next, std::move(edges)).with_bfs_parity();
}

// ---------------------------------------------------------------- io

void save_graph(std::ostream& out, const BipartiteGraph& g) {
  out << "n " << g.vertex_count() << " delta ";
  if (g.regular_degree())
    out << *g.regular_degree();
  else
    out << "irregular";
  out << "\nparity ";
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    out << (!g.has_parity() ? '?' : g.parity(v) == Parity::Even ? 'E' : 'O');
  out << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

BipartiteGraph load_graph(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  };
  if (!next_line()) throw ParseError(1, "missing header");
  std::size_t n = 0;
  std::optional<std::size_t> declared;
  {
    std::istringstream ss(line);
    std::string kw_n, kw_delta, dval;
    long long count = -1;
    if (!(ss >> kw_n >> count >> kw_delta >> dval) || kw_n != "n" || kw_delta != "delta" ||
        count < 0)
      throw ParseError(lineno, "malformed header, expected 'n <count> delta <d|irregular>'");
    n = static_cast<std::size_t>(count);
    if (dval != "irregular") {
      try {
        std::size_t used = 0;
        declared = std::stoul(dval, &used);
        if (used != dval.size()) throw std::invalid_argument(dval);
      } catch (const std::exception&) {
        throw ParseError(lineno, "malformed degree '" + dval + "'");
      }
    }
  }
  if (!next_line()) throw ParseError(lineno + 1, "missing parity line");
  std::optional<std::vector<Parity>> parity;
  {
    if (line.rfind("parity", 0) != 0) throw ParseError(lineno, "expected 'parity' line");
    std::string labels = line.substr(6);
    labels.erase(0, labels.find_first_not_of(' '));
    if (labels.size() != n) throw ParseError(lineno, "parity line has wrong length");
    bool any_unknown = labels.find('?') != std::string::npos;
    if (any_unknown) {
      if (labels.find_first_not_of('?') != std::string::npos)
        throw ParseError(lineno, "parity labels must be all known or all '?'");
    } else {
      parity.emplace(n);
      for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] == 'E')
          (*parity)[i] = Parity::Even;
        else if (labels[i] == 'O')
          (*parity)[i] = Parity::Odd;
        else
          throw ParseError(lineno, std::string("bad parity label '") + labels[i] + "'");
      }
    }
  }
  std::vector<Edge> edges;
  std::set<Edge> seen;
  while (next_line()) {
    std::istringstream ss(line);
    long long u = -1, v = -1;
    std::string extra;
    if (!(ss >> u >> v) || (ss >> extra)) throw ParseError(lineno, "malformed edge line");
    if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n || static_cast<std::size_t>(v) >= n)
      throw ParseError(lineno, "edge endpoint out of range");
    if (u == v) throw ParseError(lineno, "self-loop at vertex " + std::to_string(u));
    if (u > v) throw ParseError(lineno, "edge must be written with u < v");
    Edge e{Vertex(u), Vertex(v)};
    if (!seen.insert(e).second) throw ParseError(lineno, "duplicate edge");
    if (parity && (*parity)[e.u] == (*parity)[e.v])
      throw ParseError(lineno, "edge joins two vertices of the same class");
    edges.push_back(e);
  }
  auto g = BipartiteGraph::from_edges(n, std::move(edges), std::move(parity));
  if (declared && g.regular_degree() != declared)
    throw ParseError(1, "graph is not regular of the declared degree");
  return g;
}

void save_graph_file(const std::string& path, const BipartiteGraph& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  save_graph(out, g);
}

BipartiteGraph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return load_graph(in);
}

}  // namespace hclab
