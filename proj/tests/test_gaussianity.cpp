#include "mdm/gaussianity.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

using namespace mdm;

TEST(gaussianity, vacuum_is_gaussian) {
  const auto report = gaussianity_witness(SchmidtState::vacuum(4));
  EXPECT_EQ(report.a, 0.5);
  EXPECT_EQ(report.c, 0.0);
  EXPECT_EQ(report.witness, 0.0);
  EXPECT_EQ(report.lambda_nearest, 0.0);
  EXPECT_EQ(report.leakage, 0.0);
  EXPECT_EQ(report.verdict, GaussianityVerdict::ConsistentWithGaussian);
}

TEST(gaussianity, tmsv_sits_on_the_gaussian_boundary) {
  for (double lambda : {0.1, 0.5, 0.8}) {
    const auto t = tmsv(lambda, 300);
    const auto params = variance_params(t.state);
    const double l2 = lambda * lambda;
    EXPECT_NEAR(params.a, l2 / (1.0 - l2) + 0.5, 1e-12);
    EXPECT_NEAR(params.c, lambda / (1.0 - l2), 1e-12);
    const auto report = gaussianity_witness(t.state, t.leakage);
    EXPECT_NEAR(report.witness, 0.0, 1e-12);
    EXPECT_NEAR(report.lambda_nearest, lambda, 1e-12);
    EXPECT_EQ(report.verdict, GaussianityVerdict::ConsistentWithGaussian);
  }
}

TEST(gaussianity, twin_photon_state_is_non_gaussian) {
  const auto state = SchmidtState::from_coefficients({0.0, 1.0});
  const auto report = gaussianity_witness(state, 0.0);
  EXPECT_EQ(report.a, 1.5);
  EXPECT_EQ(report.c, 0.0);
  EXPECT_EQ(report.witness, 2.0);
  EXPECT_EQ(report.verdict, GaussianityVerdict::NonGaussian);
}

TEST(gaussianity, photon_subtracted_state_is_non_gaussian) {
  const auto s = photon_subtracted(0.5, 200);
  const auto report = gaussianity_witness(s.state, s.leakage);
  EXPECT_GT(report.witness, 1e-2);
  EXPECT_EQ(report.verdict, GaussianityVerdict::NonGaussian);
}

TEST(gaussianity, heavy_truncation_is_inconclusive) {
  const auto t = tmsv(0.9, 20);
  EXPECT_EQ(gaussianity_witness(t.state, t.leakage).verdict, GaussianityVerdict::Inconclusive);
  // Without an explicit leakage the edge weight c_{N-1}^2 is used.
  const auto proxy = gaussianity_witness(t.state);
  EXPECT_NEAR(proxy.leakage, t.state[19] * t.state[19], 1e-18);
  EXPECT_EQ(proxy.verdict, GaussianityVerdict::Inconclusive);
}

TEST(gaussianity, witness_is_nonnegative_for_random_states) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> coeff(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> c(1 + trial % 30);
    for (double& x : c) x = coeff(rng);
    const auto report = gaussianity_witness(SchmidtState::normalized(std::move(c)), 0.0);
    ASSERT_GE(report.witness, -1e-12);
  }
}

TEST(gaussianity, report_formats) {
  const auto report = gaussianity_witness(SchmidtState::from_coefficients({0.0, 1.0}), 0.0);
  std::ostringstream text;
  write_report(text, report);
  EXPECT_NE(text.str().find("witness: 2\n"), std::string::npos) << text.str();
  EXPECT_NE(text.str().find("verdict: non_gaussian\n"), std::string::npos);

  std::ostringstream csv;
  write_report_csv(csv, report);
  EXPECT_EQ(csv.str(), "a,c,witness,lambda_nearest,leakage,verdict\n"
                       "1.5,0,2,0.70710678118654757,0,non_gaussian\n");
  EXPECT_EQ(to_string(GaussianityVerdict::Inconclusive), "inconclusive");
  EXPECT_EQ(to_string(GaussianityVerdict::ConsistentWithGaussian), "consistent_with_gaussian");
}
