#include "mdm/schmidt.hpp"

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "mdm/csv.hpp"
#include "mdm/errors.hpp"

using namespace mdm;

namespace {

SchmidtState random_state(std::mt19937_64& rng, std::size_t max_dim) {
  std::uniform_int_distribution<std::size_t> dim_dist(1, max_dim);
  std::uniform_real_distribution<double> coeff(0.0, 1.0);
  std::vector<double> c(dim_dist(rng));
  for (double& x : c) x = coeff(rng);
  return SchmidtState::normalized(std::move(c));
}

}  // namespace

TEST(schmidt, construction_validates_invariants) {
  EXPECT_THROW(SchmidtState::from_coefficients({}), DomainError);
  EXPECT_THROW(SchmidtState::from_coefficients({0.6, 0.6}), DomainError);
  EXPECT_THROW(SchmidtState::from_coefficients({1.0, -0.0001}), DomainError);
  EXPECT_NO_THROW(SchmidtState::from_coefficients({0.6, 0.8}));
  EXPECT_THROW(SchmidtState::normalized({0.0, 0.0}), DomainError);
  EXPECT_THROW(SchmidtState::normalized({1.0, -1e-6}), DomainError);
  const auto clamped = SchmidtState::normalized({1.0, -1e-13});
  EXPECT_EQ(clamped[1], 0.0);
}

TEST(schmidt, tmsv_vacuum_limit) {
  const auto t = tmsv(0.0, 7);
  EXPECT_EQ(t.state.dim(), 7u);
  EXPECT_EQ(t.state[0], 1.0);
  for (std::size_t n = 1; n < 7; ++n) EXPECT_EQ(t.state[n], 0.0);
  EXPECT_EQ(t.leakage, 0.0);
}

TEST(schmidt, tmsv_renormalizes_truncation) {
  const auto t = tmsv(0.5, 3);
  const double norm = std::sqrt(1.0 + 0.25 + 0.0625);
  EXPECT_NEAR(t.state[0], 1.0 / norm, 1e-15);
  EXPECT_NEAR(t.state[1], 0.5 / norm, 1e-15);
  EXPECT_NEAR(t.state[2], 0.25 / norm, 1e-15);
  EXPECT_NEAR(t.leakage, std::pow(0.5, 6), 1e-18);
}

TEST(schmidt, tmsv_large_dimension_has_negligible_leakage) {
  const auto t = tmsv(0.9, 500);
  EXPECT_LT(t.leakage, 1e-45);
  EXPECT_NEAR(t.state[0], std::sqrt(1.0 - 0.81), 1e-15);
  EXPECT_NEAR(t.state[10], std::sqrt(1.0 - 0.81) * std::pow(0.9, 10), 1e-15);
}

TEST(schmidt, family_parameters_out_of_range) {
  EXPECT_THROW(tmsv(1.0, 5), DomainError);
  EXPECT_THROW(tmsv(-0.1, 5), DomainError);
  EXPECT_THROW(tmsv(0.5, 0), DomainError);
  EXPECT_THROW(photon_subtracted(1.0, 5), DomainError);
}

TEST(schmidt, photon_subtracted_coefficients) {
  const auto vac = photon_subtracted(0.0, 10);
  EXPECT_EQ(vac.state[0], 1.0);
  EXPECT_EQ(vac.state[1], 0.0);

  const auto s = photon_subtracted(0.5, 50);
  EXPECT_NEAR(s.state[1] / s.state[0], 1.0, 1e-15);
  EXPECT_NEAR(s.state[2] / s.state[1], 0.75, 1e-15);
}

TEST(schmidt, photon_subtracted_normalization_identity) {
  // sum (n+1)^2 y^n = (1+y)/(1-y)^3 makes the untruncated state unit norm.
  for (double x : {0.2, 0.5, 0.8}) {
    const double y = x * x;
    double sum = 0.0;
    for (int n = 0; n < 2000; ++n) sum += (n + 1.0) * (n + 1.0) * std::pow(y, n);
    EXPECT_NEAR(sum * std::pow(1.0 - y, 3) / (1.0 + y), 1.0, 1e-12);
    const auto s = photon_subtracted(x, 400);
    EXPECT_LT(s.leakage, 1e-30);
  }
  const auto coarse = photon_subtracted(0.8, 5);
  EXPECT_GT(coarse.leakage, 0.1);
}

TEST(schmidt, fidelity_series_examples) {
  const auto vacuum = SchmidtState::vacuum(4);
  EXPECT_NEAR(fidelity_output(vacuum), 0.5, 1e-16);
  EXPECT_NEAR(fidelity_estimation(vacuum), 0.5, 1e-16);

  const auto photon = SchmidtState::from_coefficients({0.0, 1.0});
  EXPECT_NEAR(fidelity_output(photon), 0.25, 1e-16);
  EXPECT_NEAR(fidelity_estimation(photon), 0.25, 1e-16);

  const double h = std::sqrt(0.5);
  const auto mixed = SchmidtState::normalized({h, h});
  // 1/4 (m=n=0) + 2 * 1/8 (cross) + 1/8 (m=n=1)
  EXPECT_NEAR(fidelity_output(mixed), 0.625, 1e-15);
}

TEST(schmidt, tmsv_series_reproduce_bk_closed_forms) {
  const auto table = LogFactorialTable(1001);
  for (int i = 0; i <= 20; ++i) {
    const double r = 0.1 * i;
    const auto state = tmsv(std::tanh(r), 500).state;
    EXPECT_NEAR(fidelity_output(state, table), 1.0 / (1.0 + std::exp(-2.0 * r)), 1e-10) << r;
    EXPECT_NEAR(fidelity_estimation(state), 1.0 / (1.0 + std::cosh(r) * std::cosh(r)), 1e-10)
        << r;
  }
}

TEST(schmidt, tmsv_series_match_lambda_forms) {
  for (double lambda : {0.1, 0.4, 0.7}) {
    const auto state = tmsv(lambda, 200).state;
    EXPECT_NEAR(fidelity_output(state), (1.0 + lambda) / 2.0, 1e-12);
    const double l2 = lambda * lambda;
    EXPECT_NEAR(fidelity_estimation(state), (1.0 - l2) / (2.0 - l2), 1e-12);
  }
}

TEST(schmidt, fidelity_properties_on_random_states) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto state = random_state(rng, 40);
    const double f = fidelity_output(state);
    const double g = fidelity_estimation(state);
    ASSERT_GT(f, 0.0);
    ASSERT_LE(f, 1.0);
    ASSERT_GT(g, 0.0);
    ASSERT_LE(g, 0.5);
    const auto padded = state.padded(state.dim() + 9);
    ASSERT_NEAR(fidelity_output(padded), f, 1e-15);
    ASSERT_EQ(fidelity_estimation(padded), g);
  }
}

TEST(schmidt, load_vacuum_from_text) {
  std::istringstream in("0 1.0\n");
  const auto state = read_state(in);
  EXPECT_EQ(state.dim(), 1u);
  EXPECT_EQ(state[0], 1.0);
}

TEST(schmidt, save_records_header_and_round_trips) {
  const auto t = tmsv(0.5, 3);
  std::ostringstream out;
  write_state(out, t.state, {{"lambda", format_double(0.5)}});
  const std::string text = out.str();
  EXPECT_NE(text.find("# dim: 3"), std::string::npos);
  EXPECT_NE(text.find("# lambda: 0.5"), std::string::npos);
  int data_lines = 0;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    if (!line.empty() && line[0] != '#') ++data_lines;
  }
  EXPECT_EQ(data_lines, 3);

  std::istringstream in(text);
  const auto back = read_state(in);
  ASSERT_EQ(back.dim(), 3u);
  for (std::size_t n = 0; n < 3; ++n) EXPECT_EQ(back[n], t.state[n]);
}

TEST(schmidt, file_round_trip_is_bit_exact) {
  std::mt19937_64 rng(11);
  const std::filesystem::path dir = MDM_TEST_TMPDIR;
  std::filesystem::create_directories(dir);
  for (int trial = 0; trial < 25; ++trial) {
    const auto state = random_state(rng, 60);
    const auto path = dir / "state_round_trip.txt";
    save_state(state, path);
    const auto back = load_state(path);
    ASSERT_EQ(back.dim(), state.dim());
    for (std::size_t n = 0; n < state.dim(); ++n) ASSERT_EQ(back[n], state[n]);
  }
}

TEST(schmidt, load_rejects_bad_files_with_line_numbers) {
  const auto expect_line = [](const std::string& text, std::size_t line) {
    std::istringstream in(text);
    try {
      read_state(in);
      FAIL() << "expected ParseError for: " << text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), line) << text;
    }
  };
  expect_line("# header\n0 0.99498743710662\n1 -0.1\n", 3);
  expect_line("0 1.0 extra\n", 1);
  expect_line("0 abc\n", 1);
  expect_line("0 0.6\n2 0.8\n", 2);
  expect_line("# nothing here\n", 1);
  expect_line("0 0.5\n1 0.5\n", 2);
}

TEST(schmidt, load_accepts_small_norm_drift) {
  std::istringstream in("0 0.6000001\n1 0.8\n");
  const auto state = read_state(in);
  double norm2 = 0.0;
  for (double c : state.coeffs()) norm2 += c * c;
  EXPECT_NEAR(norm2, 1.0, 1e-14);
}
