#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "hclab/hardcore.hpp"

using namespace hclab;

namespace {
FugacityParams lam(const char* s) { return FugacityParams::parse(s); }
}  // namespace

TEST(Fugacity, Parse) {
  auto h = lam("1/2");
  EXPECT_DOUBLE_EQ(h.lambda, 0.5);
  ASSERT_TRUE(h.exact);
  EXPECT_EQ(*h.exact, ratio(1, 2));
  EXPECT_EQ(*lam("0.25").exact, ratio(1, 4));
  EXPECT_DOUBLE_EQ(lam("2").lambda_tilde, std::log(3.0));
  EXPECT_ANY_THROW(lam("-1"));
  EXPECT_ANY_THROW(lam("abc"));
}

TEST(Independence, Basics) {
  auto k2 = build_torus({2, 1});
  EXPECT_TRUE(is_independent(k2, Configuration(2)));
  EXPECT_FALSE(is_independent(k2, Configuration::from_bits("11")));
  auto z = build_torus({4, 2});
  Configuration s(16);
  s.set(0);
  s.set(5);  // (0,0) and (1,1)
  EXPECT_TRUE(is_independent(z, s));
}

TEST(Configuration, Bits) {
  auto s = Configuration::from_bits("0101");
  EXPECT_EQ(s.count(), 2u);
  EXPECT_EQ(s.mask(), 0b1010u);
  EXPECT_EQ(s.to_bits(), "0101");
  EXPECT_EQ(Configuration::from_mask(4, 0b1010), s);
  EXPECT_ANY_THROW(Configuration::from_bits("01x"));
}

TEST(Enumerate, Counts) {
  EXPECT_EQ(enumerate_configs(build_torus({2, 1})).size(), 3u);
  EXPECT_EQ(enumerate_configs(build_cycle(4)).size(), 7u);
  EXPECT_EQ(enumerate_configs(build_cycle(6)).size(), 18u);
  EXPECT_EQ(independence_polynomial(build_cycle(4)), (std::vector<std::uint64_t>{1, 4, 2, 0, 0}));
  EXPECT_THROW(enumerate_configs(build_torus({4, 2}), 10), CapExceeded);
}

TEST(Partition, ClosedForms) {
  for (const char* l : {"1/3", "1", "2", "5/2"}) {
    auto p = lam(l);
    Rational x = *p.exact;
    auto z2 = partition_bruteforce(build_torus({2, 1}), p);
    ASSERT_TRUE(z2.exact);
    EXPECT_EQ(*z2.exact, 1 + 2 * x);
    auto z4 = partition_bruteforce(build_cycle(4), p);
    EXPECT_EQ(*z4.exact, 1 + 4 * x + 2 * x * x);
  }
  EXPECT_EQ(*partition_bruteforce(build_cycle(4), lam("1")).exact, 7);
  EXPECT_NEAR(partition_bruteforce(build_cycle(6), lam("1")).log_z, std::log(18.0), 1e-14);
}

TEST(Partition, TransferMatchesBrute) {
  auto t = build_transfer_matrix({4, 1}, 1.0);
  EXPECT_EQ(t.states.size(), 2u);
  EXPECT_NEAR(partition_transfer_torus({4, 1}, lam("1")).log_z, std::log(7.0), 1e-12);
  EXPECT_NEAR(partition_transfer_torus({6, 1}, lam("1")).log_z, std::log(18.0), 1e-12);
  for (const char* l : {"1/2", "1", "3"}) {
    double brute = partition_bruteforce(build_torus({4, 2}), lam(l)).log_z;
    double tr = partition_transfer_torus({4, 2}, lam(l)).log_z;
    EXPECT_NEAR(tr, brute, 1e-10 * std::abs(brute));
  }
  EXPECT_EQ(partition_transfer_torus({4, 2}, lam("1"), 1).method, partition_transfer_torus({4, 2}, lam("1")).method);
  EXPECT_ANY_THROW(partition_transfer_torus({4, 2}, lam("1"), 2));
}

TEST(Partition, JsonShape) {
  auto j = partition_bruteforce(build_cycle(4), lam("1")).to_json();
  EXPECT_TRUE(j.contains("logZ"));
  EXPECT_EQ(j["method"], "brute");
  EXPECT_EQ(j["exact"], "7");
}

TEST(Gibbs, Masses) {
  auto d = exact_distribution(build_torus({2, 1}), lam("2"));
  std::map<std::uint64_t, double> m;
  for (std::size_t i = 0; i < d.size(); ++i) m[d.outcome(i)] = d.prob(i);
  EXPECT_NEAR(m[0], 0.2, 1e-15);
  EXPECT_NEAR(m[1], 0.4, 1e-15);
  EXPECT_NEAR(m[2], 0.4, 1e-15);
  auto c4 = exact_distribution(build_cycle(4), lam("1"));
  EXPECT_NEAR(c4.probability([](std::uint64_t s) { return s == 0; }), 1.0 / 7, 1e-15);
}

TEST(Gibbs, Expectations) {
  auto size = [](std::uint64_t s) { return static_cast<double>(std::popcount(s)); };
  EXPECT_NEAR(expectation(build_torus({2, 1}), lam("1"), size), 2.0 / 3, 1e-15);
  EXPECT_NEAR(expectation(build_cycle(4), lam("1"), size), 8.0 / 7, 1e-15);
  EXPECT_NEAR(expectation(build_cycle(4), lam("1"), [](std::uint64_t) { return 1.0; }), 1.0, 1e-15);
}

TEST(Glauber, DetailedBalanceExact) {
  auto g = build_cycle(4);
  auto configs = enumerate_configs(g);
  for (const Rational& l : {Rational(1), ratio(3, 2)}) {
    for (auto a : configs)
      for (auto b : configs) {
        if (std::popcount(a ^ b) != 1) continue;
        Rational wa = pow_rational(l, std::popcount(a)), wb = pow_rational(l, std::popcount(b));
        EXPECT_EQ(wa * glauber_transition(g, l, a, b), wb * glauber_transition(g, l, b, a));
      }
    // rows sum to one
    for (auto a : configs) {
      Rational row = 0;
      for (auto b : configs) row += glauber_transition(g, l, a, b);
      EXPECT_EQ(row, 1);
    }
  }
}

TEST(Glauber, SmallLambdaEmpties) {
  auto s = glauber_run(build_torus({4, 2}), 1e-9, 20000, 5);
  EXPECT_EQ(s.count(), 0u);
}

TEST(Glauber, Deterministic) {
  auto g = build_torus({4, 2});
  EXPECT_EQ(glauber_run(g, 1.0, 5000, 42), glauber_run(g, 1.0, 5000, 42));
  auto s = glauber_run(g, 2.0, 5000, 43);
  EXPECT_TRUE(is_independent(g, s));
}

TEST(Glauber, K2Frequencies) {
  auto k2 = build_torus({2, 1});
  GlauberChain c(k2, 1.0, 9);
  std::map<std::uint64_t, std::size_t> hits;
  const std::size_t n = 300000;
  for (std::size_t i = 0; i < n; ++i) {
    c.step();
    ++hits[c.state().mask()];
  }
  for (std::uint64_t s : {0u, 1u, 2u}) EXPECT_NEAR(static_cast<double>(hits[s]) / n, 1.0 / 3, 0.01);
}

TEST(FixedSize, Uniformity) {
  auto c4 = build_cycle(4);
  EXPECT_EQ(sample_fixed_size(c4, 0, 10, 1).config.count(), 0u);
  std::map<std::uint64_t, int> hits;
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    auto s = sample_fixed_size(c4, 2, 20, seed);
    EXPECT_EQ(s.class_size, 2u);
    ++hits[s.config.mask()];
  }
  ASSERT_EQ(hits.size(), 2u);
  for (auto [m, k] : hits) EXPECT_NEAR(k, 1000, 3 * std::sqrt(500.0));
  auto c6 = sample_fixed_size(build_cycle(6), 3, 50, 7);
  EXPECT_EQ(c6.class_size, 2u);
  EXPECT_TRUE(is_independent(build_cycle(6), c6.config));
  EXPECT_ANY_THROW(sample_fixed_size(c4, 3, 10, 1));
}

TEST(TrivialBound, Holds) {
  for (const auto& g : {build_cycle(4), build_cycle(6), build_torus({4, 2}), build_hypercube(3)}) {
    auto r = trivial_lower_bound_check(g, lam("1"));
    EXPECT_TRUE(r.pass) << r.witness;
  }
  EXPECT_GE(*partition_bruteforce(build_torus({4, 2}), lam("1")).exact, 256);
}

TEST(LogTrace, Rescaling) {
  Eigen::MatrixXd m(2, 2);
  m << 1, 1, 1, 0;
  EXPECT_NEAR(log_trace_power(m, 4), std::log(7.0), 1e-13);
  // Lucas numbers: trace(M^n) = L_n
  EXPECT_NEAR(log_trace_power(m, 10), std::log(123.0), 1e-12);
  Eigen::MatrixXd big = m * 1e200;
  EXPECT_NEAR(log_trace_power(big, 4), std::log(7.0) + 4 * 200 * std::log(10.0), 1e-9);
}
