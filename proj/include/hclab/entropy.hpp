#pragma once

#include <cstdint>
#include <vector>

#include "hclab/distribution.hpp"
#include "hclab/graph.hpp"
#include "hclab/hardcore.hpp"
#include "hclab/report.hpp"

namespace hclab {

// Shannon entropy in nats; 0 log(1/0) = 0.
double shannon_entropy(const FiniteDistribution& dist);
// S(X ; E). A null event means "everything".
double entropy_of(const FiniteDistribution& dist, const View& x, const Event& e = nullptr);
// S(X | Y ; E) = sum P(X=x, Y=y | E) log 1/P(X=x | Y=y, E). Throws
// std::domain_error if P(E) = 0.
double conditional_entropy(const FiniteDistribution& dist, const View& x, const View& y,
                           const Event& e = nullptr);

// View picking the bits of `mask` out of an outcome.
View project(std::uint64_t mask);
// Packs two views with y in the high 32 bits; both must fit in 32 bits.
View pair_view(View x, View y);

double binary_entropy(double x);
CheckReport binary_entropy_bound_check(const std::vector<double>& grid);

// Throws std::domain_error unless mu << nu.
double kl_divergence(const FiniteDistribution& mu, const FiniteDistribution& nu);

// Random subset of coordinate indices, independent of the tuple.
struct SubsetDistribution {
  std::vector<std::uint64_t> subsets;
  std::vector<double> probs;
  double inclusion(int j) const;
  double min_inclusion(int coords) const;
};

// S(X) <= (1/p) S(X_K | K) for a tuple of `coords` coordinates packed as bits.
CheckReport shearer_check(const FiniteDistribution& joint, int coords, const SubsetDistribution& k,
                          double p);
// Chain-rule route: p S(X) <= sum_j P(j in K) S(X_j | X_<j) <= E S(X_K).
CheckReport shearer_chain_route_check(const FiniteDistribution& joint, int coords,
                                      const SubsetDistribution& k, double p);
// Lovasz-extension route: p S(X) = F^(p 1) <= F^(E 1_K) <= E F(1_K).
CheckReport shearer_choquet_route_check(const FiniteDistribution& joint, int coords,
                                        const SubsetDistribution& k, double p);
// F(K1 & K2) + F(K1 | K2) <= F(K1) + F(K2) over all pairs, F(K) = S(X_K).
CheckReport entropy_submodularity_check(const FiniteDistribution& joint, int coords);
// Lovasz extension of F(K) = S(X_K) at a point of [0,1]^coords.
double entropy_lovasz_extension(const FiniteDistribution& joint, int coords,
                                const std::vector<double>& point);

// Free energy I(sigma) = S(sigma) + (log lambda) E|sigma| for a distribution
// over configuration masks.
double free_energy(const FiniteDistribution& dist, const FugacityParams& lambda);
// I(X | Y ; E) = S(X | Y ; E) + (log lambda) E[|X| | E], |X| = popcount of the view.
double conditional_free_energy(const FiniteDistribution& dist, const View& x, const View& y,
                               const Event& e, const FugacityParams& lambda);

// I(dist) = log Z - KL(dist || mu).
CheckReport variational_identity_check(const BipartiteGraph& g, const FugacityParams& lambda,
                                       const FiniteDistribution& dist);
// For mu conditioned on E: I = log zeta(E).
CheckReport conditioned_free_energy_check(const BipartiteGraph& g, const FugacityParams& lambda,
                                          const Event& e);
// I(sigma_v | X, Y ; E) <= log(1+lambda) E[X | E] whenever sigma_v <= X.
CheckReport single_site_free_energy_check(const FiniteDistribution& dist, const View& sigma_v,
                                          const View& x, const View& y, const Event& e,
                                          const FugacityParams& lambda);
// I(sigma) <= sum over blocks I(sigma_block) for a partition of the vertices.
CheckReport free_energy_subadditivity_check(const FiniteDistribution& dist,
                                            const std::vector<std::uint64_t>& blocks,
                                            const FugacityParams& lambda);
// I(sigma) <= (1/p) I(sigma_K | K) when every vertex is in K with probability exactly p.
CheckReport free_energy_shearer_check(const FiniteDistribution& dist, int n,
                                      const SubsetDistribution& k, const FugacityParams& lambda);

}  // namespace hclab
