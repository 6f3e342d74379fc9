#include <gtest/gtest.h>

#include "hclab/expansion.hpp"
#include "hclab/hardcore.hpp"
#include "hclab/order.hpp"

using namespace hclab;

namespace {
Vertex at(const TorusSpec& s, int x, int y) {
  std::vector<int> c{x, y};
  return s.index(c);
}
}  // namespace

TEST(CoarseField, Empty) {
  auto g = build_torus({4, 2});
  Configuration s(16);
  auto f = coarse_field(g, s);
  for (auto v : g.even_vertices()) EXPECT_EQ(f.phi[v], 1);
  for (auto u : g.odd_vertices()) EXPECT_EQ(f.phi_hat(u), 1);
  EXPECT_EQ(roughness(g, s).value, 0);
}

TEST(CoarseField, AllOdd) {
  auto g = build_torus({4, 2});
  Configuration s(16);
  for (auto u : g.odd_vertices()) s.set(u);
  ASSERT_TRUE(is_independent(g, s));
  auto f = coarse_field(g, s);
  for (auto v : g.even_vertices()) EXPECT_EQ(f.phi[v], 0);
  EXPECT_EQ(roughness(g, s).value, 0);
}

TEST(CoarseField, SingleOddVertex) {
  TorusSpec spec{4, 2};
  auto g = build_torus(spec);
  const Vertex u = at(spec, 1, 0);
  ASSERT_EQ(g.parity(u), Parity::Odd);
  Configuration s(16);
  s.set(u);
  auto f = coarse_field(g, s);
  int zeros = 0;
  for (auto v : g.even_vertices()) {
    zeros += f.phi[v] == 0;
    if (f.phi[v] == 0) EXPECT_TRUE(g.adjacent(u, v));
  }
  EXPECT_EQ(zeros, 4);
  // 12 disagreeing edges out of 32: 4 around u plus 2 at each of the 4 zeros
  auto r = roughness(g, s);
  EXPECT_EQ(r.value, ratio(3, 8));
  EXPECT_EQ(r.odd_formula, ratio(3, 8));
  EXPECT_EQ(MaskOrder(g).roughness(s.mask()), ratio(3, 8));
}

TEST(Roughness, FormulasAgreeEverywhere) {
  for (const auto& g : {build_cycle(6), build_torus({4, 2}), build_hypercube(3)}) {
    MaskOrder mo(g);
    for_each_config(g, [&](std::uint64_t s) {
      auto r = roughness(g, Configuration::from_mask(g.vertex_count(), s));
      EXPECT_EQ(r.value, r.odd_formula);
      EXPECT_EQ(mo.roughness(s), r.value);
    });
  }
}

TEST(Roughness, HalfEvenClass) {
  auto g = build_torus({4, 2});
  Configuration s(16);
  auto even = g.even_vertices();
  for (std::size_t i = 0; i < even.size() / 2; ++i) s.set(even[i]);
  auto r = roughness(g, s);
  EXPECT_EQ(r.value, r.odd_formula);
  // even sites only: every even vertex still has vacant neighbours, so phi is flat
  EXPECT_EQ(r.value, 0);
}

TEST(Occupation, Counts) {
  auto g = build_torus({4, 2});
  Configuration s(16);
  s.set(0);
  s.set(2);
  s.set(1);
  auto o = occupation(g, s);
  EXPECT_EQ(o.even, 2u);
  EXPECT_EQ(o.odd, 1u);
  EXPECT_EQ(o.total, 3u);
  EXPECT_EQ(o.m, 1u);
  auto om = occupation_mask(s.mask(), g.class_mask(Parity::Even));
  EXPECT_EQ(om.m, 1u);
}

TEST(MLePhi, Examples) {
  TorusSpec spec{4, 2};
  auto g = build_torus(spec);
  auto e = check_M_le_Phi(g, Configuration(16), ratio(1, 4));
  EXPECT_TRUE(e.pass);
  EXPECT_EQ(e.lhs, 0.0);
  Configuration s(16);
  s.set(at(spec, 1, 0));
  auto r = check_M_le_Phi(g, s, ratio(1, 4));
  EXPECT_TRUE(r.pass);
  EXPECT_DOUBLE_EQ(r.rhs, 48.0);
  EXPECT_EQ(M_le_Phi_bound(4, ratio(1, 4), ratio(3, 8), 16), 48);
}

TEST(MLePhi, ExhaustiveWithExactCheeger) {
  auto g = build_torus({4, 2});
  Rational h = cheeger_exact(g).value;
  for_each_config(g, [&](std::uint64_t s) {
    EXPECT_TRUE(check_M_le_Phi(g, Configuration::from_mask(16, s), h).pass);
  });
}

TEST(Events, BadTorus) {
  TorusSpec spec{4, 2};
  auto big = FugacityParams::parse("1000");
  // Z_4^4 with C0 = 3: threshold 4^5 / 4^3 = 16 while the mean size is about 128
  TorusSpec z44{4, 4};
  EXPECT_DOUBLE_EQ(torus_bad_threshold(z44, 3.0), 16.0);
  EXPECT_TRUE(bad_event_torus(Configuration(256), z44, big, 3.0));
  EXPECT_FALSE(bad_event_torus(Configuration(16), spec, big, 1.0));
  OccupationStats at_mean;
  at_mean.even = 0;
  at_mean.odd = at_mean.total = 4;
  auto one = FugacityParams::parse("1");
  EXPECT_FALSE(bad_event_torus(at_mean, spec, one, 1.0));
  EXPECT_GT(torus_bad_threshold(spec, 1.0), 0.0);
}

TEST(Events, Balanced) {
  TorusSpec spec{4, 2};
  auto g = build_torus(spec);
  auto one = FugacityParams::parse("1");
  EXPECT_FALSE(balanced_event(Configuration(16), g, one));
  // M > (1/10)(1/2)16 = 0.8 needs at least one vertex in each class
  Configuration s(16);
  for (int x : {0, 2}) s.set(at(spec, 0, x));  // even
  for (int y : {1, 3}) s.set(at(spec, 2, y));  // odd
  ASSERT_TRUE(is_independent(g, s));
  EXPECT_TRUE(balanced_event(s, g, one));
}

TEST(Events, HypercubeSplits) {
  EXPECT_TRUE(hamming_split_event(0, 3));
  EXPECT_TRUE(coordinate_split_event(0, 3));
  // vertex 000 has weight 0 and is even: occupying it violates the split
  EXPECT_FALSE(hamming_split_event(1, 3));
}
