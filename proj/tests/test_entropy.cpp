#include <gtest/gtest.h>

#include <cmath>

#include "hclab/entropy.hpp"
#include "hclab/hardcore.hpp"
#include "hclab/suite.hpp"

using namespace hclab;

namespace {
const double kLog2 = std::log(2.0);

// Two fair bits packed as bit0 = X1, bit1 = X2.
FiniteDistribution independent_bits() { return FiniteDistribution({0, 1, 2, 3}, {0.25, 0.25, 0.25, 0.25}); }
FiniteDistribution equal_bits() { return FiniteDistribution({0, 3}, {0.5, 0.5}); }
}  // namespace

TEST(Distribution, Validation) {
  EXPECT_THROW(FiniteDistribution({0, 1}, {0.5, 0.6}), std::invalid_argument);
  EXPECT_THROW(FiniteDistribution({0, 0}, {0.5, 0.5}), std::invalid_argument);
  EXPECT_THROW(FiniteDistribution({0, 1}, {-0.5, 1.5}), std::invalid_argument);
  auto d = FiniteDistribution::from_weights({1, 2}, {1, 3});
  EXPECT_DOUBLE_EQ(d.prob(1), 0.75);
  EXPECT_THROW(d.conditioned([](Outcome) { return false; }), std::domain_error);
}

TEST(Entropy, Closed) {
  EXPECT_EQ(shannon_entropy(FiniteDistribution::point_mass(5)), 0.0);
  EXPECT_NEAR(shannon_entropy(FiniteDistribution({0, 1}, {0.5, 0.5})), kLog2, 1e-15);
  EXPECT_NEAR(shannon_entropy(FiniteDistribution({0, 1}, {1.0 / 3, 2.0 / 3})), std::log(3.0) - 2.0 / 3 * kLog2,
              1e-15);
  EXPECT_NEAR(shannon_entropy(FiniteDistribution({0, 1, 2}, {0.5, 0.5, 0.0})), kLog2, 1e-15);
}

TEST(Entropy, Conditional) {
  auto x = project(1), y = project(2);
  auto ind = independent_bits();
  EXPECT_NEAR(conditional_entropy(ind, x, y), entropy_of(ind, x), 1e-15);
  auto eq = equal_bits();
  EXPECT_NEAR(conditional_entropy(eq, x, y), 0.0, 1e-15);
  EXPECT_NEAR(conditional_entropy(eq, x, y, [](Outcome o) { return (o & 1) != 0; }), 0.0, 1e-15);
  EXPECT_NEAR(entropy_of(eq, x, [](Outcome o) { return (o & 1) != 0; }), 0.0, 1e-15);
  EXPECT_THROW(conditional_entropy(eq, x, y, [](Outcome) { return false; }), std::domain_error);
  // chain rule S(X,Y) = S(Y) + S(X|Y)
  auto d = FiniteDistribution({0, 1, 2, 3}, {0.1, 0.2, 0.3, 0.4});
  EXPECT_NEAR(shannon_entropy(d), entropy_of(d, y) + conditional_entropy(d, x, y), 1e-14);
}

TEST(Entropy, BinaryBound) {
  EXPECT_NEAR(binary_entropy(0.5), kLog2, 1e-15);
  EXPECT_EQ(binary_entropy(0.0), 0.0);
  std::vector<double> grid;
  for (int i = 1; i <= 99; ++i) grid.push_back(i / 100.0);
  auto r = binary_entropy_bound_check(grid);
  EXPECT_TRUE(r.pass);
  EXPECT_GT(r.margin, 0.0);
}

TEST(Entropy, Kl) {
  FiniteDistribution a({0, 1}, {1.0, 0.0}), u({0, 1}, {0.5, 0.5});
  EXPECT_NEAR(kl_divergence(u, u), 0.0, 1e-15);
  EXPECT_NEAR(kl_divergence(a, u), kLog2, 1e-15);
  FiniteDistribution p({0, 1}, {2.0 / 3, 1.0 / 3}), q({0, 1}, {1.0 / 3, 2.0 / 3});
  EXPECT_NEAR(kl_divergence(p, q), 2.0 / 3 * std::log(2.0) - 1.0 / 3 * std::log(2.0), 1e-15);
  EXPECT_THROW(kl_divergence(u, a), std::domain_error);
}

TEST(Shearer, Equalities) {
  auto ind = independent_bits();
  SubsetDistribution singles{{1, 2}, {0.5, 0.5}};
  auto r = shearer_check(ind, 2, singles, 0.5);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.lhs, 2 * kLog2, 1e-14);
  EXPECT_NEAR(r.rhs, 2 * kLog2, 1e-14);
  SubsetDistribution full{{3}, {1.0}};
  auto f = shearer_check(equal_bits(), 2, full, 1.0);
  EXPECT_NEAR(f.lhs, f.rhs, 1e-14);
  EXPECT_DOUBLE_EQ(singles.min_inclusion(2), 0.5);
}

TEST(Shearer, RandomRoutes) {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 200; ++t) {
    int coords = 1 + t % 3;
    auto joint = random_tuple_distribution(coords, rng);
    auto k = random_subset_distribution(coords, rng);
    double p = k.min_inclusion(coords);
    EXPECT_TRUE(shearer_check(joint, coords, k, p).pass);
    EXPECT_TRUE(shearer_chain_route_check(joint, coords, k, p).pass);
    EXPECT_TRUE(shearer_choquet_route_check(joint, coords, k, p).pass);
    EXPECT_TRUE(entropy_submodularity_check(joint, coords).pass);
  }
}

TEST(Submodularity, EqualBitsStrict) {
  auto d = equal_bits();
  EXPECT_TRUE(entropy_submodularity_check(d, 2).pass);
  // K1 = {1}, K2 = {2}: S(X1) + S(X2) - S(X1, X2) - S(empty) = log 2
  double gap = entropy_of(d, project(1)) + entropy_of(d, project(2)) - shannon_entropy(d);
  EXPECT_NEAR(gap, kLog2, 1e-15);
  auto ind = independent_bits();
  EXPECT_TRUE(entropy_submodularity_check(ind, 2).pass);
  EXPECT_NEAR(entropy_of(ind, project(1)) + entropy_of(ind, project(2)) - shannon_entropy(ind), 0.0, 1e-15);
}

TEST(Lovasz, Vertices) {
  auto d = equal_bits();
  EXPECT_NEAR(entropy_lovasz_extension(d, 2, {1, 1}), kLog2, 1e-15);
  EXPECT_NEAR(entropy_lovasz_extension(d, 2, {1, 0}), kLog2, 1e-15);
  EXPECT_NEAR(entropy_lovasz_extension(d, 2, {0, 0}), 0.0, 1e-15);
  // positively homogeneous
  EXPECT_NEAR(entropy_lovasz_extension(d, 2, {0.5, 0.2}), 0.5 * kLog2, 1e-15);
}

TEST(FreeEnergy, Values) {
  auto one = FugacityParams::parse("1");
  EXPECT_EQ(free_energy(FiniteDistribution::point_mass(0), one), 0.0);
  auto k2 = build_torus({2, 1});
  EXPECT_NEAR(free_energy(exact_distribution(k2, one), one), std::log(3.0), 1e-14);
  EXPECT_NEAR(free_energy(exact_distribution(build_cycle(4), one), one), std::log(7.0), 1e-14);
}

TEST(FreeEnergy, Variational) {
  auto one = FugacityParams::parse("1");
  auto k2 = build_torus({2, 1});
  auto r = variational_identity_check(k2, one, exact_distribution(k2, one));
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.lhs, std::log(3.0), 1e-14);
  auto e = variational_identity_check(k2, one, FiniteDistribution::point_mass(0));
  EXPECT_TRUE(e.pass);
  EXPECT_NEAR(e.lhs, 0.0, 1e-14);
  auto c = conditioned_free_energy_check(build_cycle(4), one, [](Outcome s) { return s != 0; });
  EXPECT_TRUE(c.pass);
  EXPECT_NEAR(c.rhs, std::log(6.0), 1e-14);
}

TEST(FreeEnergy, SingleSite) {
  // sigma_v Bernoulli(lambda/(1+lambda)) with X = 1 gives equality
  auto two = FugacityParams::parse("2");
  FiniteDistribution d({0, 1}, {1.0 / 3, 2.0 / 3});
  auto sigma = project(1);
  auto x = [](Outcome) -> std::uint64_t { return 1; };
  auto y = [](Outcome) -> std::uint64_t { return 0; };
  auto r = single_site_free_energy_check(d, sigma, x, y, nullptr, two);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.lhs, r.rhs, 1e-14);
  EXPECT_NEAR(r.rhs, std::log(3.0), 1e-14);
  auto zero = [](Outcome) -> std::uint64_t { return 0; };
  auto z = single_site_free_energy_check(FiniteDistribution::point_mass(0), sigma, zero, y, nullptr, two);
  EXPECT_NEAR(z.lhs, 0.0, 1e-15);
  EXPECT_NEAR(z.rhs, 0.0, 1e-15);
}

TEST(FreeEnergy, Subadditivity) {
  auto one = FugacityParams::parse("1");
  auto d = exact_distribution(build_cycle(4), one);
  EXPECT_TRUE(free_energy_subadditivity_check(d, {0b0011, 0b1100}, one).pass);
  EXPECT_TRUE(free_energy_subadditivity_check(d, {0b0001, 0b0010, 0b0100, 0b1000}, one).pass);
}
