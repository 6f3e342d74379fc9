#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "hclab/chessboard.hpp"
#include "hclab/distribution.hpp"
#include "hclab/expansion.hpp"
#include "hclab/graph.hpp"
#include "hclab/hardcore.hpp"
#include "hclab/rational.hpp"
#include "hclab/report.hpp"

namespace hclab {

// Random A inside the even class, with B inside the odd class derived from A.
struct ExposureScheme {
  std::string name;
  std::vector<std::pair<std::uint64_t, double>> a_dist;
  bool b_all_odd = false;  // B = V_O; otherwise B = {u : |N(u) & A| >= 2}

  // Each even vertex independently with probability p (default 1/delta).
  // Needs at most 16 even vertices.
  static ExposureScheme iid(const BipartiteGraph& g, std::optional<double> p = std::nullopt);
  // Same A law, B fixed to the whole odd class.
  static ExposureScheme with_all_odd(const BipartiteGraph& g, ExposureScheme base);
  std::uint64_t b_of(const BipartiteGraph& g, std::uint64_t a) const;
};

// 1 - (1 - 1/delta)^delta - (1 - 1/delta)^(delta - 1)
double exposure_density_closed_form(std::size_t delta);
// P(u in B) for every odd u; throws std::invalid_argument if it is not constant.
double exposure_density(const BipartiteGraph& g, const ExposureScheme& scheme);
// Closed form vs exact enumeration of A & N(u), and vs Monte Carlo within 3 sigma.
CheckReport exposure_density_check(std::size_t delta, std::size_t samples, std::uint64_t seed);

// Random law on the given configurations: skewed weights on a random support.
FiniteDistribution random_config_distribution(const std::vector<std::uint64_t>& configs,
                                              std::mt19937_64& rng);
// Gibbs law as a FiniteDistribution over masks.
FiniteDistribution gibbs_distribution(const BipartiteGraph& g, const FugacityParams& lambda);
// Push-forward to the full coarse field (even and odd bits) as masks.
FiniteDistribution phi_distribution(const BipartiteGraph& g, const FiniteDistribution& sigma);
// E Phi for a law on coarse-field masks.
double expected_roughness(const BipartiteGraph& g, const FiniteDistribution& phi);

// I(sigma) <= I(sigma_E | sigma_O) + (1/s) I(sigma_B | B, A, phi_A) + (1/s) S(phi_A | A)
CheckReport three_term_check(const BipartiteGraph& g, const FiniteDistribution& sigma,
                             const ExposureScheme& scheme, const FugacityParams& lambda);
// Conditioned on u in B, A can be coupled with two independent uniform
// neighbours of u lying in A. Hall's condition over sets of ordered pairs.
CheckReport two_neighbour_coupling_check(const BipartiteGraph& g, const ExposureScheme& scheme);
// The three inequalities bounding the gain terms, each checked exactly.
CheckReport gain_terms_check(const BipartiteGraph& g, const FiniteDistribution& sigma,
                             const ExposureScheme& scheme, const FugacityParams& lambda);

// Local expansion parameters after exact verification: the torus certificate
// when `torus` is given and it verifies, otherwise the single-edge law.
struct CertifiedExpansion {
  LocalExpansionCertificate cert;
  CheckReport verification;
  std::string kind;
};
CertifiedExpansion certified_expansion(const BipartiteGraph& g, const std::optional<TorusSpec>& torus);

// S(phi_A | A) <= C_LE |V| (2 (p + 1/delta) S(E Phi) + log 2 / (delta M_LE)),
// p = max_v P(v in A). phi is a law on coarse-field masks.
CheckReport loss_term_check(const BipartiteGraph& g, const FiniteDistribution& phi,
                            const std::vector<std::pair<std::uint64_t, double>>& a_dist,
                            const LocalExpansionCertificate& cert);
// S(phi_V(T) | T) <= q |E| S(E Phi) + log 2 for a random dominating tree, and
// the local expansion parameters M_LE = q |E|, C_LE = delta M_LE / |V|.
CheckReport simplified_route_check(const BipartiteGraph& g, const FiniteDistribution& phi,
                                   const SubgraphSource& trees);

struct ConstantFit {
  std::string id;
  std::string direction;  // "min C such that ..." or "max c such that ..."
  double constant = 0.0;
  std::size_t grid_size = 0;
  std::size_t informative = 0;  // instances that constrain the constant
  bool certified = false;
  std::size_t recert_failures = 0;
  std::string worst_instance;
  Json details = Json::object();
  Json to_json() const;
};

struct PropInstance {
  std::string label;
  const BipartiteGraph* graph = nullptr;
  FugacityParams lambda;
  FiniteDistribution sigma;
  Rational c_le;
  Rational m_le;
};
// Smallest C with
// I/|V| - lt/2 <= -lt E Phi / 4 + (C C_LE / delta)(E Phi log(e / E Phi) + 1 / M_LE).
ConstantFit prop_I_le_Phi_constant_fit(const std::vector<PropInstance>& grid);

struct MainStudy {
  CheckReport report;           // first inequality, asserted exactly
  double mu_event = 0.0;        // mu(M > r)
  double log_ratio = 0.0;       // log(zeta(M > r) / (1 + lambda)^(|V|/2))
  double unit = 0.0;            // lt h r / delta
  std::optional<double> c_max;  // largest c allowed by this instance
};
MainStudy main_theorem_study(const BipartiteGraph& g, const FugacityParams& lambda, double r,
                             const Rational& h);
// Largest c with zeta(M > r)/(1+lambda)^(|V|/2) <= (1+lambda)^(-c h r / delta) on the grid.
ConstantFit main_theorem_fit(const std::vector<std::pair<std::string, MainStudy>>& grid);

// gap = log Z / L^d - lt / 2 >= 0
CheckReport free_energy_gap(const TorusSpec& spec, const FugacityParams& lambda);
// Smallest C with gap <= (C/d)(1+lambda)^(-c d) + C/L^d for fixed c.
ConstantFit free_energy_gap_fit(const std::vector<std::pair<TorusSpec, FugacityParams>>& grid,
                                double c);

// P(|Bin(n,p) - np| >= m) <= 2 (p(1-p))^(m^2/n), exact left side.
CheckReport hoeffding_check(int n_max, const std::vector<Rational>& p_grid);
Rational binomial_tail(int n, const Rational& p, const Rational& m);

// Each link of the fixed-size chain with lambda = N / (|V|/2 - N).
CheckReport fixed_size_chain_check(const BipartiteGraph& g, std::size_t N,
                                   const std::function<bool(std::uint64_t)>& event);

struct CorollaryStudy {
  CheckReport report;                // first inequality and the sandwich
  std::optional<double> c2_needed;   // smallest C_2 for the second inequality
  bool empty_event = false;
  bool unsatisfiable = false;        // zeta(B) >= (1+lambda)^(L^d/2): no C_2 works
  double rho = 0.0;
  double volume = 0.0;               // L^d
  int d = 1;                  // log_{1+lambda}(zeta(B) / (1+lambda)^(L^d/2))
};
CorollaryStudy corollary_torus_study(const TorusSpec& spec, const FugacityParams& lambda, double c0);
ConstantFit corollary_torus_fit(const std::vector<std::tuple<TorusSpec, FugacityParams, double>>& grid);

// On Z_{2 ell}^d: the half-space set K, exact p_K on the disseminated
// B_{H,eps}, the free-energy chain for log zeta of it, and |sigma_K| < 2^d 3 alpha.
CheckReport bad_norm_halfspace_check(const ChessContext& ctx, const FugacityParams& lambda,
                                     const Rational& c_alpha = ratio(1, 100));

Rational weitz_threshold(int max_degree);
double weitz_threshold_value(int max_degree);

// Z of the m-blow-up at lambda equals Z at (1+lambda)^m - 1, exactly.
CheckReport blow_up_equivalence_check(const BipartiteGraph& f, int m, const Rational& lambda);

// mu(E_Bal) on the k-blow-up of the linear gadget with m blocks, through the
// reduced model on the gadget itself.
double gadget_balance_reduced(int m, int k, const FugacityParams& lambda);
// Same quantity by direct enumeration of the blow-up.
double gadget_balance_direct(int m, int k, const FugacityParams& lambda);
CheckReport gadget_reduction_check(int m, int k, const FugacityParams& lambda);

struct GadgetScanRow {
  int delta = 0;
  int m = 0;
  double lambda = 0.0;
  double log_delta_over_delta = 0.0;
  double mu_balanced = 0.0;
};
// delta must be a multiple of 3; the blow-up factor is delta / 3.
std::vector<GadgetScanRow> gadget_threshold_scan(const std::vector<int>& deltas,
                                                 const std::vector<double>& lambdas, int m = 1);

}  // namespace hclab
