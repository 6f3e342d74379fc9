#pragma once

#include <cstdint>
#include <vector>

#include "hclab/graph.hpp"
#include "hclab/hardcore.hpp"
#include "hclab/rational.hpp"
#include "hclab/report.hpp"

namespace hclab {

// phi_v = 1 iff every neighbour of the even vertex v is vacant. Odd vertices
// carry the count of neighbours with phi = 1 and the majority value (ties -> 1).
struct CoarseField {
  std::vector<std::uint8_t> phi;
  std::vector<std::uint32_t> ones;  // odd vertices only; 0 elsewhere
  std::size_t delta = 0;

  Rational phi_hat(Vertex u) const { return ratio(ones[u], static_cast<unsigned long>(delta)); }
};

CoarseField coarse_field(const BipartiteGraph& g, const Configuration& s);

struct RoughnessValue {
  Rational value;          // edge formula
  Rational odd_formula;    // (2/|V|) sum_u min(phi_hat, 1 - phi_hat)
  double as_double() const { return value.get_d(); }
};

// Throws std::logic_error if the two formulas disagree.
RoughnessValue roughness(const BipartiteGraph& g, const Configuration& s);

// Mask versions for |V| <= 64; exact integer numerators.
struct MaskField {
  std::uint64_t phi_even = 0;      // even vertices with phi = 1
  std::uint64_t phi_odd = 0;       // odd vertices whose majority is 1
  std::uint64_t disagreements = 0; // edges with phi_u != phi_v
  std::uint64_t min_sum = 0;       // sum over odd u of min(ones, delta - ones)
};

class MaskOrder {
 public:
  explicit MaskOrder(const BipartiteGraph& g);
  MaskField field(std::uint64_t sigma) const;
  Rational roughness(std::uint64_t sigma) const;
  const BipartiteGraph& graph() const { return *g_; }
  std::uint64_t even_mask() const { return even_; }
  std::uint64_t odd_mask() const { return odd_; }

 private:
  const BipartiteGraph* g_;
  std::uint64_t even_ = 0, odd_ = 0;
  std::vector<Vertex> odd_list_;
  std::size_t delta_ = 0;
};

struct OccupationStats {
  std::size_t even = 0;
  std::size_t odd = 0;
  std::size_t total = 0;
  std::size_t m = 0;  // min(even, odd)
};

OccupationStats occupation(const BipartiteGraph& g, const Configuration& s);
OccupationStats occupation_mask(std::uint64_t sigma, std::uint64_t even_mask);

// M <= (delta / (2h)) Phi |V| with h a lower bound on the Cheeger constant.
CheckReport check_M_le_Phi(const BipartiteGraph& g, const Configuration& s, const Rational& h);
// Exact right-hand side, for scans.
Rational M_le_Phi_bound(std::size_t delta, const Rational& h, const Rational& phi, std::size_t n);

double torus_bad_threshold(const TorusSpec& spec, double c0);
bool bad_event_torus(const OccupationStats& occ, const TorusSpec& spec, const FugacityParams& lambda,
                     double c0);
bool bad_event_torus(const Configuration& s, const TorusSpec& spec, const FugacityParams& lambda,
                     double c0);

// M > (1/10) (lambda/(1+lambda)) |V|
bool balanced_event(const OccupationStats& occ, std::size_t n, const FugacityParams& lambda);
bool balanced_event(const Configuration& s, const BipartiteGraph& g, const FugacityParams& lambda);

// Hypercube scan events: even vertices of weight <= d/2 and odd vertices of
// weight > d/2 vacant (hamming_split), or split by the first coordinate
// (coordinate_split). Vertex weight = number of 1 coordinates.
bool hamming_split_event(std::uint64_t sigma, int d);
bool coordinate_split_event(std::uint64_t sigma, int d);

}  // namespace hclab
