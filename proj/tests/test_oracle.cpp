#include "mdm/oracle.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "mdm/errors.hpp"

using namespace mdm;

namespace {

SchmidtState random_state(std::mt19937_64& rng, std::size_t dim) {
  std::uniform_real_distribution<double> coeff(0.0, 1.0);
  std::vector<double> c(dim);
  for (double& x : c) x = coeff(rng);
  return SchmidtState::normalized(std::move(c));
}

}  // namespace

TEST(oracle, rule_reproduces_moments) {
  const auto rule = laguerre_rule(30);
  ASSERT_EQ(rule.order(), 30u);
  for (std::size_t i = 0; i < rule.order(); ++i) {
    ASSERT_GT(rule.nodes[i], 0.0);
    ASSERT_GT(rule.weights[i], 0.0);
    if (i > 0) ASSERT_GT(rule.nodes[i], rule.nodes[i - 1]);
  }
  for (int k = 0; k <= 40; ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.order(); ++i) {
      sum += rule.weights[i] * std::pow(rule.nodes[i], k);
    }
    const double exact = std::exp(std::lgamma(k + 1.0) - (k + 1) * std::log(2.0));
    ASSERT_NEAR(sum, exact, 1e-12 * exact) << k;
  }
}

TEST(oracle, rule_orders) {
  const auto one = laguerre_rule(1);
  ASSERT_EQ(one.order(), 1u);
  EXPECT_NEAR(one.nodes[0], 0.5, 1e-15);
  EXPECT_NEAR(one.weights[0], 0.5, 1e-15);
  EXPECT_THROW(laguerre_rule(0), DomainError);

  const auto big = laguerre_rule(500);
  const double total = std::accumulate(big.weights.begin(), big.weights.end(), 0.0);
  EXPECT_NEAR(total, 0.5, 1e-13);
  for (std::size_t i = 0; i < big.order(); ++i) {
    ASSERT_TRUE(std::isfinite(big.log_weights[i])) << i;
  }
  EXPECT_LT(big.log_weights.back(), -745.0);
  EXPECT_EQ(big.weights.back(), 0.0);
}

TEST(oracle, simple_states) {
  const auto vacuum = oracle_fidelities(SchmidtState::vacuum(1), 1);
  EXPECT_NEAR(vacuum.F, 0.5, 1e-15);
  EXPECT_NEAR(vacuum.G, 0.5, 1e-15);
  EXPECT_FALSE(vacuum.precision_warning);

  const auto photon = oracle_fidelities(SchmidtState::from_coefficients({0.0, 1.0}), 2);
  EXPECT_NEAR(photon.F, 0.25, 1e-15);
  EXPECT_NEAR(photon.G, 0.25, 1e-15);

  const auto coarse = oracle_fidelities(SchmidtState::from_coefficients({0.0, 1.0}), 1);
  EXPECT_TRUE(coarse.precision_warning);
}

TEST(oracle, quadrature_agrees_with_series_on_random_states) {
  std::mt19937_64 rng(20);
  for (int trial = 0; trial < 40; ++trial) {
    const auto state = random_state(rng, 1 + trial * 3);
    const auto oracle = oracle_fidelities(state, state.dim());
    ASSERT_NEAR(oracle.F, fidelity_output(state), 1e-12) << trial;
    ASSERT_NEAR(oracle.G, fidelity_estimation(state), 1e-12) << trial;
  }
}

TEST(oracle, quadrature_agrees_with_series_at_full_size) {
  const auto rule = laguerre_rule(500);
  for (double lambda : {0.5, 0.9, 0.97}) {
    const auto state = tmsv(lambda, 500).state;
    const auto oracle = oracle_fidelities(state, rule);
    EXPECT_NEAR(oracle.F, fidelity_output(state), 1e-10) << lambda;
    EXPECT_NEAR(oracle.G, fidelity_estimation(state), 1e-10) << lambda;
  }
  const auto s = photon_subtracted(0.9, 500).state;
  const auto oracle = oracle_fidelities(s, rule);
  EXPECT_NEAR(oracle.F, fidelity_output(s), 1e-10);
  EXPECT_NEAR(oracle.G, fidelity_estimation(s), 1e-10);
}

TEST(oracle, monte_carlo_is_deterministic_per_seed) {
  const auto state = tmsv(0.5, 30).state;
  const auto a = mc_fidelities(state, 20000, 42);
  const auto b = mc_fidelities(state, 20000, 42);
  const auto c = mc_fidelities(state, 20000, 43);
  EXPECT_EQ(a.F, b.F);
  EXPECT_EQ(a.G, b.G);
  EXPECT_EQ(a.F_stderr, b.F_stderr);
  EXPECT_NE(a.F, c.F);
  EXPECT_THROW(mc_fidelities(state, 9999, 1), DomainError);
}

TEST(oracle, monte_carlo_agrees_within_error_bars) {
  std::mt19937_64 rng(5);
  std::vector<SchmidtState> states{SchmidtState::vacuum(1), tmsv(0.5, 30).state,
                                   photon_subtracted(0.6, 60).state};
  for (int i = 0; i < 3; ++i) states.push_back(random_state(rng, 10 + 20 * i));
  for (const auto& state : states) {
    const auto mc = mc_fidelities(state, 100000, 7);
    const double f = fidelity_output(state);
    const double g = fidelity_estimation(state);
    EXPECT_LE(std::abs(mc.F - f), 5.0 * mc.F_stderr + 1e-15) << state.dim();
    EXPECT_LE(std::abs(mc.G - g), 5.0 * mc.G_stderr + 1e-15) << state.dim();
    EXPECT_LT(mc.F_stderr, 0.01);
  }
}

TEST(oracle, counter_rng_streams) {
  CounterRng a(1, 0);
  CounterRng b(1, 0);
  CounterRng other(1, 1);
  double mean = 0.0;
  int equal_to_other = 0;
  for (int i = 0; i < 10000; ++i) {
    const double u = a.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_EQ(u, b.uniform());
    if (u == other.uniform()) ++equal_to_other;
    mean += u;
  }
  EXPECT_EQ(equal_to_other, 0);
  EXPECT_NEAR(mean / 10000.0, 0.5, 0.02);
}
