#include <gtest/gtest.h>

#include <cmath>

#include "hclab/chessboard.hpp"

using namespace hclab;

namespace {
const FugacityParams kOne = FugacityParams::parse("1");

ReflectionGroupSpec spec(int ell, int L, int d) { return {ell, L, d}; }
}  // namespace

TEST(Group, Sizes) {
  EXPECT_EQ(group_elements(spec(3, 6, 1)).size(), 2u);
  EXPECT_EQ(group_elements(spec(1, 4, 1)).size(), 4u);
  EXPECT_EQ(group_elements(spec(3, 6, 2)).size(), 4u);
  EXPECT_ANY_THROW(spec(2, 6, 1).validate());
}

TEST(Group, TauS) {
  auto s141 = spec(1, 4, 1);
  EXPECT_EQ(tau_s(s141, {0}).apply(s141, 3), 3u);
  // s = 1 is the reflection v -> 2 - v mapping [0,1] onto [1,2]
  auto t = tau_s(s141, {1});
  EXPECT_EQ(t.apply(s141, 0), 2u);
  EXPECT_EQ(t.apply(s141, 1), 1u);
  auto s361 = spec(3, 6, 1);
  auto r = tau_s(s361, {1});
  EXPECT_EQ(r.apply(s361, 0), 0u);
  EXPECT_EQ(r.apply(s361, 3), 3u);
  EXPECT_EQ(r.apply(s361, 1), 5u);
  for (const auto& sp : {s141, s361, spec(1, 4, 2), spec(3, 6, 2)}) {
    auto els = group_elements(sp);
    std::vector<int> s(sp.d, 0);
    s[0] = 1;
    EXPECT_EQ(els[block_index(sp, s)].label(), tau_s(sp, s).label());
    EXPECT_TRUE(check_group_structure(sp).pass);
  }
}

TEST(Seminorm, ConstantOne) {
  auto ctx = ChessContext::build(spec(1, 4, 1));
  auto one = LocalObservable::constant(ctx.spec.block_bits(), 1.0);
  EXPECT_NEAR(chessboard_seminorm(ctx, one, 1.0).norm, std::pow(7.0, 0.25), 1e-12);
  auto zero = LocalObservable::constant(ctx.spec.block_bits(), 0.0);
  EXPECT_EQ(chessboard_seminorm(ctx, zero, 1.0).norm, 0.0);
}

TEST(Seminorm, SiteIndicator) {
  auto ctx = ChessContext::build(spec(1, 4, 1));
  auto f = LocalObservable::site_indicator(ctx.spec.block_bits(), 0);
  for (double l : {0.5, 1.0, 3.0}) EXPECT_NEAR(chessboard_seminorm(ctx, f, l).norm, std::sqrt(l), 1e-12);
}

TEST(Chessboard, Estimate) {
  auto ctx = ChessContext::build(spec(1, 4, 1));
  const int bits = ctx.spec.block_bits();
  std::vector<LocalObservable> fs(ctx.elements.size(), LocalObservable::constant(bits, 1.0));
  auto eq = check_chessboard_estimate(ctx, fs, 1.0);
  EXPECT_TRUE(eq.pass);
  EXPECT_NEAR(eq.lhs, eq.rhs, 1e-12);
  fs[0] = LocalObservable::site_indicator(bits, 0);
  auto r = check_chessboard_estimate(ctx, fs, 1.0);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.lhs, 2.0, 1e-12);
  EXPECT_NEAR(r.rhs, std::pow(7.0, 0.75), 1e-12);
}

TEST(Chessboard, RandomAndProperties) {
  for (const auto& sp : {spec(1, 4, 1), spec(1, 4, 2)}) {
    auto ctx = ChessContext::build(sp);
    EXPECT_TRUE(check_reflection_positivity(ctx, 1.0, 30, 3).pass);
    EXPECT_TRUE(check_seminorm_properties(ctx, 1.5, 30, 4).pass);
    std::mt19937_64 rng(5);
    std::vector<LocalObservable> fs;
    for (std::size_t i = 0; i < ctx.elements.size(); ++i)
      fs.push_back(LocalObservable::random(sp.block_bits(), rng, true));
    EXPECT_TRUE(check_chessboard_estimate(ctx, fs, 2.0).pass);
  }
}

TEST(TorusComparison, D1) {
  auto f = LocalObservable::site_indicator(2, 0);
  EXPECT_TRUE(seminorm_torus_comparison(f, 1, 4, 1, 1.0).pass);
  std::mt19937_64 rng(8);
  auto g = LocalObservable::random(4, rng, true);
  EXPECT_TRUE(seminorm_torus_comparison(g, 3, 6, 1, 1.0).pass);
  auto one = LocalObservable::constant(2, 1.0);
  EXPECT_NEAR(interface_trace(one, 1, 4, 1.0), 7.0, 1e-12);
  EXPECT_NEAR(interface_trace(one, 1, 6, 1.0), 18.0, 1e-12);
}

TEST(Weights, Blocks) {
  auto sp = spec(3, 6, 2);
  // corner of [0,3]^2 is block point 0, interior point (1,1) is 1*4+1
  EXPECT_EQ(block_weight(sp, 0), ratio(1, 4));
  EXPECT_EQ(block_weight(sp, 5), 1);
  EXPECT_TRUE(check_stabilizers(sp).pass);
}

TEST(Weights, SumsIdentity) {
  auto ctx = ChessContext::build(spec(3, 6, 1));
  const std::uint64_t all = (1u << 6) - 1;
  EXPECT_EQ(weighted_sum(ctx, 1, all, 0), ratio(1, 2));
  auto r = check_sums_identity(ctx, {1}, all);
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(check_sums_identity(ctx, ctx.configs, ctx.graph.class_mask(Parity::Even)).pass);
  EXPECT_THROW(check_sums_identity(ctx, {1}, 0b000010), std::invalid_argument);
}

TEST(Phase, Definitions) {
  auto sp = spec(3, 6, 1);
  auto ph = phase_observable(sp, kOne);
  EXPECT_EQ(ph.g[0], 0);
  EXPECT_EQ(ph.f[0], 0);
  EXPECT_FALSE(ph.b0[0]);
  EXPECT_NE(ph.bh[0], 0u);
  // odd block points 1 and 3 occupied
  std::uint32_t odd = (1u << 1) | (1u << 3);
  EXPECT_EQ(ph.g[odd], 1);
  EXPECT_EQ(face_points(sp).size(), 2u);
}

TEST(Phase, SeparatorAndZeroMean) {
  auto ctx = ChessContext::build(spec(3, 6, 1));
  for (const char* l : {"1", "2"}) {
    auto lam = FugacityParams::parse(l);
    auto ph = phase_observable(ctx.spec, lam);
    EXPECT_TRUE(check_separator_exhaustive(ctx, ph).pass);
    auto z = check_f_expectation_zero(ctx, ph, lam);
    EXPECT_TRUE(z.pass);
    EXPECT_NEAR(z.lhs, 0.0, 1e-12);
  }
}

TEST(Phase, ContourChainEmpty) {
  auto ctx = ChessContext::build(spec(3, 6, 1));
  auto ph = phase_observable(ctx.spec, kOne);
  auto r = contour_probability_chain(ctx, ph, kOne, {});
  EXPECT_TRUE(r.pass);
  auto one = contour_probability_chain(ctx, ph, kOne, {{0}});
  EXPECT_TRUE(one.pass);
}
