#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hclab/graph.hpp"
#include "hclab/hardcore.hpp"
#include "hclab/rational.hpp"
#include "hclab/report.hpp"

namespace hclab {

// Block side ell on the torus Z_L^d, L a multiple of 2 ell.
struct ReflectionGroupSpec {
  int ell = 1;
  int L = 2;
  int d = 1;

  void validate() const;
  int per_axis() const { return L / ell; }
  std::size_t group_size() const;
  int block_side() const { return ell + 1; }
  int block_bits() const;  // (ell + 1)^d
  TorusSpec torus() const { return {L, d}; }
};

// rotation(n): x -> x + 2 n ell ; reflection(n): x -> 2 n ell - x  (mod L)
struct AxisElement {
  bool reflection = false;
  int n = 0;
  int apply(int x, int ell, int L) const;
};

struct GroupElement {
  std::vector<AxisElement> axes;
  Vertex apply(const ReflectionGroupSpec& spec, Vertex v) const;
  std::string label() const;
};

// Ordered so that group_elements(spec)[index_of(s)] == tau_s(spec, s).
std::vector<GroupElement> group_elements(const ReflectionGroupSpec& spec);
// The element mapping [0, ell]^d onto [0, ell]^d + ell s.
GroupElement tau_s(const ReflectionGroupSpec& spec, const std::vector<int>& s);
// Row-major index of s in Z_{L/ell}^d.
std::size_t block_index(const ReflectionGroupSpec& spec, const std::vector<int>& s);

// Edges to edges, bijectivity, closure under composition, tau_s uniqueness.
CheckReport check_group_structure(const ReflectionGroupSpec& spec);

// Block points are indexed row-major in coordinates 0..ell.
std::vector<int> block_coords(const ReflectionGroupSpec& spec, int b);
Vertex block_vertex(const ReflectionGroupSpec& spec, int b);

// Function of the pattern on [0, ell]^d, stored as a table over 2^bits patterns.
struct LocalObservable {
  int bits = 0;
  std::vector<double> table;

  double operator()(std::uint32_t pattern) const { return table[pattern]; }
  static LocalObservable constant(int bits, double c);
  // 1 if block point b is occupied.
  static LocalObservable site_indicator(int bits, int b);
  static LocalObservable random(int bits, std::mt19937_64& rng, bool nonnegative);
  LocalObservable scaled(double c) const;
  LocalObservable plus(const LocalObservable& o) const;
};

// Enumerated torus plus, for every group element, the torus vertex read by
// each block point.
struct ChessContext {
  ReflectionGroupSpec spec;
  BipartiteGraph graph;
  std::vector<std::uint64_t> configs;
  std::vector<GroupElement> elements;
  std::vector<std::vector<Vertex>> images;  // [tau][block point]

  // enumerate = false skips Omega (geometry only).
  static ChessContext build(const ReflectionGroupSpec& spec, std::size_t cap = kEnumerationCap,
                            bool enumerate = true);
  // p_b = sigma_{tau(b)}
  std::uint32_t pattern(std::uint64_t sigma, std::size_t tau) const;
};

struct DisseminatedValue {
  double value = 0.0;     // zeta(prod_tau tau f_tau)
  double abs_value = 0.0; // same with |f_tau|
};

// One observable per group element, in group_elements order.
DisseminatedValue disseminated_zeta(const ChessContext& ctx, const std::vector<LocalObservable>& fs,
                                    double lambda);

struct SeminormValue {
  double norm = 0.0;
  double inner = 0.0;  // zeta of the disseminated product before the root
  bool clamped = false;
};

// Throws std::logic_error when the inner value is below -1e-9 relative to
// the absolute mass; tiny negatives are clamped to 0.
SeminormValue chessboard_seminorm(const ChessContext& ctx, const LocalObservable& f, double lambda);

// zeta(prod tau f_tau) <= prod ||f_tau||
CheckReport check_chessboard_estimate(const ChessContext& ctx, const std::vector<LocalObservable>& fs,
                                      double lambda);
// Inner integral >= -1e-12 (relative) for random signed observables.
CheckReport check_reflection_positivity(const ChessContext& ctx, double lambda, int trials,
                                        std::uint64_t seed);
// Homogeneity, triangle inequality and monotonicity on random pairs.
CheckReport check_seminorm_properties(const ChessContext& ctx, double lambda, int trials,
                                      std::uint64_t seed);

// d = 1: B(a, b) sums f over block patterns with end values a, b, giving each
// endpoint half its fugacity. zeta on Z_L equals trace((B B^T)^(L / 2 ell)).
Eigen::Matrix2d interface_matrix(const LocalObservable& f, int ell, double lambda);
double interface_trace(const LocalObservable& f, int ell, int L, double lambda);

// ||f||_{ell | L + 2 ell} <= ||f||_{ell | L}; on d = 1 also matches both
// enumerated inner values against the interface traces.
CheckReport seminorm_torus_comparison(const LocalObservable& f, int ell, int L, int d,
                                      double lambda);

// sum over A of w_v sigma_v, reading sigma through tau (identity by default).
Rational weighted_sum(const ChessContext& ctx, std::uint64_t sigma, std::uint64_t a_mask,
                      std::size_t tau = 0);
Rational block_weight(const ReflectionGroupSpec& spec, int b);
bool is_invariant(const ChessContext& ctx, std::uint64_t a_mask);
// sum_tau |sigma tau|^w_A == |sigma_A|; throws std::invalid_argument if A is not invariant.
CheckReport check_sums_identity(const ChessContext& ctx, const std::vector<std::uint64_t>& sigmas,
                                std::uint64_t a_mask);
// 1 / w_v == |Stab(v)| for every block point.
CheckReport check_stabilizers(const ReflectionGroupSpec& spec);

// f = (1 - 1_B) g on the block, precomputed for every pattern.
struct PhaseObservable {
  ReflectionGroupSpec spec;
  Rational alpha;
  std::vector<std::int8_t> f;
  std::vector<std::int8_t> g;
  std::vector<std::uint8_t> b0;
  std::vector<std::uint32_t> bh;  // bit k: face k (axis k/2, side 0 for even k, ell for odd k)

  bool in_b(std::uint32_t p) const { return b0[p] || bh[p]; }
  LocalObservable indicator_b() const;
  LocalObservable indicator_b0() const;
  // B_{H, eps} = B_H and {g = eps} minus B_0
  LocalObservable indicator_bh_eps(int face, int eps) const;
  LocalObservable as_local() const;
};

PhaseObservable phase_observable(const ReflectionGroupSpec& spec, const FugacityParams& lambda,
                                 const Rational& c_alpha = ratio(1, 100));
std::vector<std::vector<int>> face_points(const ReflectionGroupSpec& spec);

// tau_s f * tau_t f >= 0 for one configuration and a nearest-neighbour pair.
CheckReport check_separator(const ChessContext& ctx, const PhaseObservable& ph, std::uint64_t sigma,
                            const std::vector<int>& s, const std::vector<int>& t);
// The same over every configuration and every nearest-neighbour pair.
CheckReport check_separator_exhaustive(const ChessContext& ctx, const PhaseObservable& ph);
// E f = 0 for odd ell, from exact counts by size.
CheckReport check_f_expectation_zero(const ChessContext& ctx, const PhaseObservable& ph,
                                     const FugacityParams& lambda);
// P(tau_s f = 0 for s in A) <= ||1_B||^|A| ||1||^(|D| - |A|) / Z <= (||1_B|| e^{-ell^d lt / 2})^|A|
CheckReport contour_probability_chain(const ChessContext& ctx, const PhaseObservable& ph,
                                      const FugacityParams& lambda,
                                      const std::vector<std::vector<int>>& blocks);

}  // namespace hclab
