#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hclab {

using Vertex = std::uint32_t;

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  bool operator==(const Edge&) const = default;
  auto operator<=>(const Edge&) const = default;
};

enum class Parity : std::uint8_t { Even = 0, Odd = 1 };

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Simple undirected graph with optional bipartition labels. Immutable once
// built; edges are stored with u < v and sorted.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;

  // Throws GraphError on self loops, duplicate edges, out-of-range endpoints
  // or an edge joining two vertices of the same parity.
  static BipartiteGraph from_edges(std::size_t n, std::vector<Edge> edges,
                                   std::optional<std::vector<Parity>> parity = std::nullopt);

  std::size_t vertex_count() const { return adj_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const Vertex> neighbors(Vertex v) const { return adj_[v]; }
  std::size_t degree(Vertex v) const { return adj_[v].size(); }
  bool adjacent(Vertex u, Vertex v) const;

  // The common degree if every vertex has the same degree.
  std::optional<std::size_t> regular_degree() const { return regular_; }
  // Degree for code that needs a δ-regular graph; throws otherwise.
  std::size_t delta() const;

  bool has_parity() const { return !parity_.empty(); }
  Parity parity(Vertex v) const;
  const std::vector<Parity>& parities() const { return parity_; }
  std::vector<Vertex> even_vertices() const;
  std::vector<Vertex> odd_vertices() const;

  bool is_connected() const;
  // Proper 2-colouring by BFS (vertex 0 of each component gets Even).
  std::optional<std::vector<Parity>> two_coloring() const;
  // Same graph with parity labels from two_coloring(); throws if not bipartite.
  BipartiteGraph with_bfs_parity() const;

  // Neighbour bitmask; only valid when vertex_count() <= 64.
  std::uint64_t neighbor_mask(Vertex v) const { return masks_.at(v); }
  std::uint64_t class_mask(Parity p) const;

  bool operator==(const BipartiteGraph& o) const {
    return adj_ == o.adj_ && parity_ == o.parity_;
  }

 private:
  std::vector<std::vector<Vertex>> adj_;
  std::vector<Edge> edges_;
  std::vector<Parity> parity_;
  std::vector<std::uint64_t> masks_;
  std::optional<std::size_t> regular_;
};

struct TorusSpec {
  int L = 2;
  int d = 1;
  std::size_t vertex_count() const;
  std::vector<int> coords(Vertex v) const;
  Vertex index(std::span<const int> c) const;
  void validate() const;
};

BipartiteGraph build_torus(const TorusSpec& spec);
BipartiteGraph build_cycle(int n);
BipartiteGraph build_hypercube(int d);
BipartiteGraph complete_bipartite(int a, int b);

// Random δ-regular bipartite graph with `half` vertices per side, built as a
// union of δ random perfect matchings (rejection on repeated edges).
BipartiteGraph random_regular_bipartite(int half, int delta, std::mt19937_64& rng);

// Codewords of the binary Hamming code of length 2^r - 1, as bitmasks
// (bit i = coordinate i). r = 1 gives the trivial code {0} of length 1.
std::vector<std::uint32_t> hamming_code(int r);
int hamming_distance(std::uint32_t a, std::uint32_t b);

struct DominatingSet {
  std::vector<Vertex> vertices;
  std::uint32_t shift = 0;  // parity shift b (odd L only)
  int code_length = 0;      // d'
};

DominatingSet dominating_set_torus(const TorusSpec& spec);
bool is_dominating(const BipartiteGraph& g, std::span<const Vertex> set);

struct TreeSubgraph {
  std::vector<Vertex> vertices;  // sorted
  std::vector<Edge> edges;       // u < v, sorted
  Vertex root = 0;
  // Tree axioms against g: edges exist in g, connected, acyclic, >= 1 edge.
  bool is_tree_in(const BipartiteGraph& g) const;
};

TreeSubgraph dominating_tree(const BipartiteGraph& g, std::span<const Vertex> dom);

// v -> s_i * v_{perm[i]} + t_i (mod L), coordinatewise.
struct TorusAutomorphism {
  std::vector<int> translation;
  std::vector<int> permutation;
  std::vector<int> flips;  // +1 / -1

  static TorusAutomorphism identity(int d);
  Vertex apply(const TorusSpec& spec, Vertex v) const;
};

TorusAutomorphism sample_torus_automorphism(const TorusSpec& spec, std::mt19937_64& rng);
// Every translation x permutation x flip combination (with repetition when L = 2).
std::vector<TorusAutomorphism> all_torus_automorphisms(const TorusSpec& spec);

struct Gadget {
  BipartiteGraph graph;
  Vertex left = 0;
  Vertex right = 0;
};

Gadget build_linear_gadget(int m);
BipartiteGraph blow_up(const BipartiteGraph& g, int m);
BipartiteGraph stretch_by_gadget(const BipartiteGraph& h, int m);

void save_graph(std::ostream& out, const BipartiteGraph& g);
BipartiteGraph load_graph(std::istream& in);
void save_graph_file(const std::string& path, const BipartiteGraph& g);
BipartiteGraph load_graph_file(const std::string& path);

}  // namespace hclab
