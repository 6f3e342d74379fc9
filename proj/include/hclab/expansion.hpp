#pragma once

#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "hclab/graph.hpp"
#include "hclab/rational.hpp"
#include "hclab/report.hpp"

namespace hclab {

class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr std::size_t kCheegerCap = 22;

struct CheegerResult {
  Rational value;
  std::vector<Vertex> witness;
};

// Exact min |dA|/|A| over 0 < |A| <= |V|/2 by Gray-code subset walk.
CheegerResult cheeger_exact(const BipartiteGraph& g, std::size_t cap = kCheegerCap);
Rational torus_cheeger_bound(const TorusSpec& spec);

struct WeightedSubgraph {
  std::vector<Edge> edges;
  std::vector<Vertex> vertices;
  double prob = 0.0;
};

// Random connected subgraph. `support` is the full law when it is finite
// and small enough to list; `sampler` draws one subgraph (prob ignored).
struct SubgraphSource {
  std::string description;
  std::optional<std::vector<WeightedSubgraph>> support;
  std::function<WeightedSubgraph(std::mt19937_64&)> sampler;
};

struct LocalExpansionCertificate {
  Rational c_le;
  Rational m_le;
  SubgraphSource source;
};

SubgraphSource single_edge_source(const BipartiteGraph& g);
// Fixed tree pushed forward by a uniform torus automorphism.
SubgraphSource torus_orbit_source(const TorusSpec& spec, const std::vector<Edge>& tree_edges,
                                  const std::vector<Vertex>& tree_vertices);
// Trace of a simple random walk of M0 vertices from a uniform start.
SubgraphSource walk_trace_source(const BipartiteGraph& g, int m0);

LocalExpansionCertificate torus_local_expansion_certificate(const TorusSpec& spec);

enum class VerifyMode { Exact, MonteCarlo };

// Exact mode needs source.support. Monte Carlo mode reports 99% Wilson
// intervals; `pass` means no significant violation, details.certified means
// the whole interval sits on the right side of each bound.
CheckReport verify_local_expansion(const BipartiteGraph& g, const LocalExpansionCertificate& cert,
                                   VerifyMode mode, std::size_t samples = 100000,
                                   std::uint64_t seed = 1);

struct WilsonInterval {
  double low = 0.0;
  double high = 1.0;
};
WilsonInterval wilson_interval(std::size_t hits, std::size_t trials, double z = 2.5758293035489);

// g_{u,w} = sum_{i < M0} P^i(u, w) for the simple random walk.
struct GreenTable {
  int m0 = 0;
  std::size_t n = 0;
  std::vector<Rational> exact;  // row-major; empty when n > 32
  std::vector<double> approx;   // always filled

  bool has_exact() const { return !exact.empty(); }
  double value(Vertex u, Vertex w) const { return approx[u * n + w]; }
  const Rational& exact_value(Vertex u, Vertex w) const { return exact[u * n + w]; }
};

GreenTable green_table(const BipartiteGraph& g, int m0);
// g_{u,w}^2 <= (g_{u,u} - 1)(g_{w,w} - 1) for distinct same-class u, w.
CheckReport check_green_positivity(const GreenTable& t, const BipartiteGraph& g);

// Exact P(walk of M0 vertices from a uniform start meets `target`).
Rational walk_hit_probability(const BipartiteGraph& g, int m0, const std::vector<Vertex>& target);
// Exact P(walk traverses edge e at least once).
Rational walk_edge_probability(const BipartiteGraph& g, int m0, const Edge& e);

struct WalkCertificate {
  LocalExpansionCertificate cert;
  CheckReport premise;
  CheckReport path_vert;
  CheckReport edge_union;
};

// Throws PreconditionError naming the worst vertex if g_vv - 1 > (C0 - 1)/delta.
WalkCertificate local_expansion_from_walk(const BipartiteGraph& g, int m0, const Rational& c0);

}  // namespace hclab
