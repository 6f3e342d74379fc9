#include <gtest/gtest.h>

#include "hclab/expansion.hpp"

using namespace hclab;

TEST(Cheeger, SmallGraphs) {
  auto c4 = cheeger_exact(build_cycle(4));
  EXPECT_EQ(c4.value, 1);
  ASSERT_EQ(c4.witness.size(), 2u);
  EXPECT_TRUE(build_cycle(4).adjacent(c4.witness[0], c4.witness[1]));
  EXPECT_EQ(cheeger_exact(build_torus({2, 1})).value, 1);
  auto z = cheeger_exact(build_torus({4, 2}));
  EXPECT_GE(z.value, ratio(1, 4));
  EXPECT_EQ(z.value, 1);
  EXPECT_THROW(cheeger_exact(build_torus({4, 3})), PreconditionError);
}

TEST(Cheeger, TorusBound) {
  EXPECT_EQ(torus_cheeger_bound({6, 3}), ratio(1, 6));
  EXPECT_EQ(torus_cheeger_bound({2, 5}), ratio(1, 2));
  for (const TorusSpec& s : {TorusSpec{4, 1}, TorusSpec{6, 1}, TorusSpec{4, 2}, TorusSpec{2, 3}, TorusSpec{2, 4}})
    EXPECT_GE(cheeger_exact(build_torus(s)).value, torus_cheeger_bound(s));
}

TEST(Certificate, TorusValues) {
  auto c42 = torus_local_expansion_certificate({4, 2});
  EXPECT_EQ(c42.m_le, 48);
  EXPECT_EQ(c42.c_le, 12);
  auto c23 = torus_local_expansion_certificate({2, 3});
  EXPECT_EQ(c23.m_le, 16);
  EXPECT_EQ(c23.c_le, 12);
}

TEST(Certificate, VerifiesExactly) {
  for (const TorusSpec& s : {TorusSpec{4, 2}, TorusSpec{2, 3}}) {
    auto cert = torus_local_expansion_certificate(s);
    auto r = verify_local_expansion(build_torus(s), cert, VerifyMode::Exact);
    EXPECT_TRUE(r.pass) << r.witness;
  }
}

TEST(Certificate, SingleEdge) {
  for (const auto& g : {build_cycle(6), build_torus({4, 2}), build_hypercube(3)}) {
    LocalExpansionCertificate c{1, 1, single_edge_source(g)};
    EXPECT_TRUE(verify_local_expansion(g, c, VerifyMode::Exact).pass);
  }
}

TEST(Certificate, InflatedFails) {
  TorusSpec s{4, 2};
  auto cert = torus_local_expansion_certificate(s);
  cert.m_le = 10000;
  auto r = verify_local_expansion(build_torus(s), cert, VerifyMode::Exact);
  EXPECT_FALSE(r.pass);
  EXPECT_FALSE(r.witness.empty());
}

TEST(Certificate, MonteCarloAgrees) {
  TorusSpec s{4, 2};
  auto cert = torus_local_expansion_certificate(s);
  auto r = verify_local_expansion(build_torus(s), cert, VerifyMode::MonteCarlo, 20000, 5);
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(r.details.contains("certified"));
}

TEST(Wilson, Interval) {
  auto w = wilson_interval(50, 100);
  EXPECT_LT(w.low, 0.5);
  EXPECT_GT(w.high, 0.5);
  auto z = wilson_interval(0, 100);
  EXPECT_EQ(z.low, 0.0);
  EXPECT_GT(z.high, 0.0);
}

TEST(Green, C4Values) {
  auto g = build_cycle(4);
  auto t = green_table(g, 2);
  ASSERT_TRUE(t.has_exact());
  EXPECT_EQ(t.exact_value(0, 0), 1);
  EXPECT_EQ(t.exact_value(0, 1), ratio(1, 2));
  EXPECT_EQ(t.exact_value(0, 3), ratio(1, 2));
  EXPECT_EQ(t.exact_value(0, 2), 0);
  EXPECT_TRUE(check_green_positivity(t, g).pass);
}

TEST(Green, Positivity) {
  auto q3 = build_hypercube(3);
  EXPECT_TRUE(check_green_positivity(green_table(q3, 4), q3).pass);
  std::mt19937_64 rng(17);
  auto r = random_regular_bipartite(6, 3, rng);
  EXPECT_TRUE(check_green_positivity(green_table(r, 6), r).pass);
}

TEST(Walk, HitProbabilities) {
  auto c4 = build_cycle(4);
  std::vector<Vertex> all{0, 1, 2, 3};
  EXPECT_EQ(walk_hit_probability(c4, 2, all), 1);
  std::vector<Vertex> one{0};
  // a two-vertex walk meets 0 if it starts there (1/4) or steps onto it (2/4 * 1/2)
  EXPECT_EQ(walk_hit_probability(c4, 2, one), ratio(1, 2));
  EXPECT_EQ(walk_edge_probability(c4, 2, Edge{0, 1}), ratio(1, 4));
}

TEST(Walk, LocalExpansion) {
  auto c4 = build_cycle(4);
  auto w = local_expansion_from_walk(c4, 2, 1);
  EXPECT_TRUE(w.premise.pass);
  EXPECT_TRUE(w.path_vert.pass);
  EXPECT_TRUE(w.edge_union.pass);
  EXPECT_DOUBLE_EQ(w.path_vert.lhs, 1.0);
  auto q3 = local_expansion_from_walk(build_hypercube(3), 2, 1);
  EXPECT_TRUE(q3.premise.pass);
  EXPECT_THROW(local_expansion_from_walk(c4, 4, 1), PreconditionError);
}
