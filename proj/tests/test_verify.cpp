#include <gtest/gtest.h>

#include <cmath>

#include "hclab/order.hpp"
#include "hclab/verify.hpp"

using namespace hclab;

namespace {
FugacityParams lam(const char* s) { return FugacityParams::parse(s); }
}  // namespace

TEST(Exposure, ClosedForm) {
  // delta = 2: 1 - 1/4 - 1/2
  EXPECT_NEAR(exposure_density_closed_form(2), 0.25, 1e-15);
  auto g = build_torus({4, 2});
  auto scheme = ExposureScheme::iid(g);
  EXPECT_NEAR(exposure_density(g, scheme), exposure_density_closed_form(4), 1e-12);
  EXPECT_TRUE(exposure_density_check(4, 20000, 3).pass);
  auto all = ExposureScheme::with_all_odd(g, scheme);
  EXPECT_TRUE(all.b_all_odd);
  EXPECT_EQ(all.b_of(g, 0), g.class_mask(Parity::Odd));
}

TEST(ThreeTerm, GibbsAndPointMass) {
  for (const auto& g : {build_cycle(4), complete_bipartite(2, 2)}) {
    auto scheme = ExposureScheme::iid(g);
    EXPECT_TRUE(three_term_check(g, gibbs_distribution(g, lam("1")), scheme, lam("1")).pass);
    auto pm = three_term_check(g, FiniteDistribution::point_mass(0), scheme, lam("1"));
    EXPECT_TRUE(pm.pass);
    EXPECT_NEAR(pm.lhs, 0.0, 1e-12);
  }
}

TEST(ThreeTerm, EqualityWhenAllOdd) {
  auto g = build_cycle(4);
  auto scheme = ExposureScheme::with_all_odd(g, ExposureScheme::iid(g));
  std::mt19937_64 rng(4);
  auto configs = enumerate_configs(g);
  for (int i = 0; i < 20; ++i) {
    auto r = three_term_check(g, random_config_distribution(configs, rng), scheme, lam("2"));
    EXPECT_TRUE(r.pass);
    EXPECT_NEAR(r.lhs, r.rhs, 1e-10);
  }
}

TEST(GainTerms, Holds) {
  auto c4 = build_cycle(4);
  EXPECT_TRUE(gain_terms_check(c4, gibbs_distribution(c4, lam("1")), ExposureScheme::iid(c4), lam("1")).pass);
  EXPECT_TRUE(
      gain_terms_check(c4, FiniteDistribution::point_mass(0), ExposureScheme::iid(c4), lam("1")).pass);
  auto k22 = complete_bipartite(2, 2);
  FiniteDistribution skew({0, 0b0011, 0b0100}, {0.2, 0.7, 0.1});
  EXPECT_TRUE(gain_terms_check(k22, skew, ExposureScheme::iid(k22), lam("3")).pass);
  EXPECT_TRUE(two_neighbour_coupling_check(c4, ExposureScheme::iid(c4)).pass);
}

TEST(LossTerm, TorusCertificate) {
  auto g = build_torus({4, 2});
  auto ce = certified_expansion(g, TorusSpec{4, 2});
  EXPECT_EQ(ce.kind, "torus");
  auto scheme = ExposureScheme::iid(g);
  auto phi = phi_distribution(g, gibbs_distribution(g, lam("1")));
  EXPECT_TRUE(loss_term_check(g, phi, scheme.a_dist, ce.cert).pass);
  auto det = loss_term_check(g, FiniteDistribution::point_mass(0), scheme.a_dist, ce.cert);
  EXPECT_TRUE(det.pass);
  EXPECT_NEAR(det.lhs, 0.0, 1e-12);
  auto fallback = certified_expansion(build_cycle(6), std::nullopt);
  EXPECT_EQ(fallback.cert.c_le, 1);
}

TEST(SimplifiedRoute, Tori) {
  for (const TorusSpec& s : {TorusSpec{4, 2}, TorusSpec{2, 3}}) {
    auto g = build_torus(s);
    auto d = dominating_set_torus(s);
    auto t = dominating_tree(g, d.vertices);
    auto src = torus_orbit_source(s, t.edges, t.vertices);
    auto phi = phi_distribution(g, gibbs_distribution(g, lam("1")));
    EXPECT_TRUE(simplified_route_check(g, phi, src).pass);
    auto r = simplified_route_check(g, FiniteDistribution::point_mass(0), src);
    EXPECT_TRUE(r.pass);
    EXPECT_NEAR(r.details["entropy_lhs"].get<double>(), 0.0, 1e-12);
  }
}

TEST(Roughness, ExpectedOfFlatField) {
  auto g = build_cycle(4);
  auto phi = phi_distribution(g, FiniteDistribution::point_mass(0));
  EXPECT_EQ(expected_roughness(g, phi), 0.0);
}

TEST(Hoeffding, Examples) {
  EXPECT_EQ(binomial_tail(10, ratio(1, 2), 5), ratio(2, 1024));
  EXPECT_EQ(binomial_tail(7, ratio(1, 3), 0), 1);
  std::vector<Rational> ps;
  for (int i = 1; i <= 9; ++i) ps.push_back(ratio(i, 10));
  EXPECT_TRUE(hoeffding_check(30, ps).pass);
  EXPECT_THROW(hoeffding_check(61, ps), std::invalid_argument);
}

TEST(FixedSize, Chain) {
  auto c4 = build_cycle(4);
  EXPECT_TRUE(fixed_size_chain_check(c4, 1, [](std::uint64_t s) { return (s & 1) != 0; }).pass);
  EXPECT_TRUE(fixed_size_chain_check(c4, 1, [](std::uint64_t) { return true; }).pass);
  auto z = build_torus({4, 2});
  const auto even = z.class_mask(Parity::Even);
  EXPECT_TRUE(
      fixed_size_chain_check(z, 2, [even](std::uint64_t s) { return occupation_mask(s, even).m >= 1; }).pass);
  EXPECT_ANY_THROW(fixed_size_chain_check(c4, 3, [](std::uint64_t) { return true; }));
}

TEST(FreeEnergyGap, ClosedForms) {
  auto a = free_energy_gap({4, 1}, lam("1"));
  EXPECT_TRUE(a.pass);
  EXPECT_NEAR(a.details["gap"].get<double>(), 0.25 * std::log(7.0) - 0.5 * std::log(2.0), 1e-12);
  auto b = free_energy_gap({2, 1}, lam("1"));
  EXPECT_NEAR(b.details["gap"].get<double>(), 0.5 * std::log(1.5), 1e-12);
  double prev = 1e9;
  for (const char* l : {"1/2", "1", "2", "4"}) {
    double g = free_energy_gap({4, 2}, lam(l)).details["gap"].get<double>();
    EXPECT_LT(g, prev);
    prev = g;
  }
}

TEST(Corollary, Z42) {
  auto st = corollary_torus_study({4, 2}, lam("2"), 1.0);
  EXPECT_TRUE(st.report.pass);
}

TEST(MainStudy, Z42) {
  auto g = build_torus({4, 2});
  auto st = main_theorem_study(g, lam("2"), 1.0, 1);
  EXPECT_TRUE(st.report.pass);
  EXPECT_GE(st.mu_event, 0.0);
  auto empty = main_theorem_study(g, lam("2"), 8.0, 1);
  EXPECT_TRUE(empty.report.pass);
  EXPECT_EQ(empty.mu_event, 0.0);
  // mu(M > r) decreases in lambda on Q_4
  auto q4 = build_hypercube(4);
  double prev = 2.0;
  for (const char* l : {"2", "4", "8", "16"}) {
    double m = main_theorem_study(q4, lam(l), 1.0, 1).mu_event;
    EXPECT_LT(m, prev);
    prev = m;
  }
}

TEST(Weitz, Values) {
  EXPECT_EQ(weitz_threshold(3), 4);
  EXPECT_EQ(weitz_threshold(4), ratio(27, 16));
  EXPECT_NEAR(weitz_threshold_value(1000) * 1000 / std::exp(1.0), 1.0, 0.01);
  EXPECT_ANY_THROW(weitz_threshold(2));
}

TEST(BlowUp, Equivalence) {
  EXPECT_TRUE(blow_up_equivalence_check(build_torus({2, 1}), 2, 1).pass);
  EXPECT_TRUE(blow_up_equivalence_check(build_cycle(4), 2, ratio(1, 2)).pass);
  EXPECT_TRUE(blow_up_equivalence_check(build_cycle(6), 3, 2).pass);
}

TEST(Gadget, ReducedMatchesDirect) {
  for (const char* l : {"1/4", "1/2", "1"}) {
    EXPECT_NEAR(gadget_balance_reduced(1, 1, lam(l)), gadget_balance_direct(1, 1, lam(l)), 1e-12);
    EXPECT_TRUE(gadget_reduction_check(1, 2, lam(l)).pass);
  }
  // m = 1 has four maximum independent sets {l,a,b,y}, {x,c,d,r}, {l,a,b,r},
  // {l,c,d,r}; the last two have M = 1, so M = k on the blow-up beats the 0.8 k
  // threshold and the large-lambda limit is 1/2 rather than 0
  EXPECT_NEAR(gadget_balance_reduced(1, 2, lam("1000000")), 0.5, 1e-4);
}

TEST(Gadget, Scan) {
  auto rows = gadget_threshold_scan({3, 6}, {0.5, 1.0}, 1);
  EXPECT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].delta, 3);
  EXPECT_NEAR(rows[0].log_delta_over_delta, std::log(3.0) / 3, 1e-15);
  EXPECT_ANY_THROW(gadget_threshold_scan({4}, {1.0}, 1));
}

TEST(Fits, CertifiedOnSmallGrids) {
  auto g = build_torus({4, 2});
  auto ce = certified_expansion(g, TorusSpec{4, 2});
  std::vector<PropInstance> inst;
  for (const char* l : {"1/2", "1", "2"})
    inst.push_back({l, &g, lam(l), gibbs_distribution(g, lam(l)), ce.cert.c_le, ce.cert.m_le});
  auto prop = prop_I_le_Phi_constant_fit(inst);
  EXPECT_TRUE(prop.certified);
  EXPECT_GE(prop.constant, 0.0);

  auto gap = free_energy_gap_fit({{TorusSpec{4, 2}, lam("1")}, {TorusSpec{4, 1}, lam("2")}}, 1.0);
  EXPECT_TRUE(gap.certified);
  EXPECT_EQ(gap.grid_size, 2u);
}
