#include "mdm/eigensolver.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "mdm/errors.hpp"

using namespace mdm;

namespace {

double dense_top(const RBlock& block) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block.entries, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

}  // namespace

TEST(eigensolver, one_by_one_block) {
  const LogFactorialTable table(8);
  const auto result = dominant_eig(build_r(0.5, 0, 1, table));
  EXPECT_DOUBLE_EQ(result.eigenvalue, 0.5);
  EXPECT_EQ(result.eigenvector(0), 1.0);
  EXPECT_LE(result.iterations, 2u);
}

TEST(eigensolver, two_by_two_closed_form) {
  const LogFactorialTable table(8);
  const auto block = build_r(0.5, 0, 2, table);
  const double a = 0.5;
  const double b = 0.125;
  const double d = 0.25;
  const double expected = (a + d) / 2.0 + std::sqrt((a - d) * (a - d) / 4.0 + b * b);
  EXPECT_NEAR(dominant_eig(block).eigenvalue, expected, 1e-13);
}

TEST(eigensolver, matches_dense_solver_across_blocks) {
  const BlockSet blocks(40, 6, true);
  for (double p : {0.05, 0.3, 0.6, 0.9, 1.0}) {
    for (int L : blocks.labels()) {
      const auto block = blocks.combined(p, L);
      const auto result = dominant_eig(block);
      const double expected = dense_top(block);
      ASSERT_NEAR(result.eigenvalue, expected, 1e-10 * expected) << p << ' ' << L;
      const Eigen::VectorXd residual =
          block.entries * result.eigenvector - result.eigenvalue * result.eigenvector;
      ASSERT_LE(residual.cwiseAbs().maxCoeff(), 1e-11);
      ASSERT_NEAR(result.eigenvector.norm(), 1.0, 1e-14);
    }
  }
}

TEST(eigensolver, perron_vector_is_nonnegative) {
  const BlockSet blocks(60, 0, false);
  for (double p : {0.1, 0.5, 0.8, 0.99}) {
    const auto result = dominant_eig(blocks.combined(p, 0));
    EXPECT_GE(result.eigenvector.minCoeff(), -1e-12) << p;
  }
}

TEST(eigensolver, budget_exhaustion_reports_last_iterate) {
  const BlockSet blocks(30, 0, false);
  try {
    dominant_eig(blocks.combined(0.7, 0), {1e-12, 3});
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_EQ(e.iterations(), 3u);
    EXPECT_GT(e.last_eigenvalue(), 0.0);
    EXPECT_GT(e.last_residual(), 0.0);
  }
  EXPECT_THROW(dominant_eig(blocks.combined(0.7, 0), {0.0, 100}), DomainError);
}

TEST(eigensolver, block_scan_error_names_p_and_l) {
  try {
    block_scan(0.4, 20, 2, {{1e-12, 2}, false});
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("p = 0.4"), std::string::npos) << what;
    EXPECT_NE(what.find("L = 0"), std::string::npos) << what;
  }
  EXPECT_THROW(block_scan(1.5, 4, 1), DomainError);
}

TEST(eigensolver, l0_block_dominates) {
  const BlockSet blocks(50, 8, true);
  for (int i = 1; i <= 20; ++i) {
    const double p = 0.05 * i;
    const auto scan = block_scan(p, blocks);
    ASSERT_EQ(scan.L_star, 0) << p;
    ASSERT_TRUE(scan.optimal_state.has_value());
    ASSERT_EQ(scan.blocks.size(), blocks.labels().size());
    for (std::size_t b = 0; b < scan.blocks.size(); ++b) {
      ASSERT_EQ(scan.blocks[b].L, blocks.labels()[b]);
      ASSERT_LE(scan.blocks[b].eigenvalue, scan.lambda_max);
    }
    ASSERT_LT(scan.degeneracy_ratio, 1.0);
  }
}

TEST(eigensolver, positive_blocks_never_beat_their_negative_partner) {
  const BlockSet blocks(40, 6, true);
  for (double p : {0.2, 0.5, 0.9}) {
    const auto scan = block_scan(p, blocks);
    for (std::size_t b = 1; b + 1 < scan.blocks.size(); b += 2) {
      ASSERT_EQ(scan.blocks[b].L, -scan.blocks[b + 1].L);
      ASSERT_LE(scan.blocks[b + 1].eigenvalue, scan.blocks[b].eigenvalue * (1.0 + 1e-12));
    }
  }
}

TEST(eigensolver, tie_at_zero_weight_goes_to_l0) {
  // At p = 0 every negative block tops out at 1/2 on its first basis vector.
  const auto scan = block_scan(0.0, 10, 3);
  EXPECT_EQ(scan.L_star, 0);
  EXPECT_DOUBLE_EQ(scan.lambda_max, 0.5);
  EXPECT_DOUBLE_EQ(scan.degeneracy_ratio, 1.0);
  ASSERT_TRUE(scan.optimal_state.has_value());
  EXPECT_NEAR((*scan.optimal_state)[0], 1.0, 1e-12);
}

TEST(eigensolver, lambda_max_is_convex_in_p) {
  const BlockSet blocks(40, 3, false);
  std::vector<double> values;
  for (int i = 0; i <= 40; ++i) values.push_back(block_scan(i / 40.0, blocks).lambda_max);
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    ASSERT_GE(values[i - 1] + values[i + 1] - 2.0 * values[i], -1e-12) << i;
  }
}

TEST(eigensolver, lambda_max_bounds_any_state) {
  const BlockSet blocks(80, 0, false);
  for (double lambda : {0.2, 0.5, 0.8}) {
    const auto state = tmsv(lambda, 80).state;
    const double f = fidelity_output(state);
    const double g = fidelity_estimation(state);
    for (double p : {0.1, 0.5, 0.9}) {
      EXPECT_GE(block_scan(p, blocks).lambda_max, p * f + (1.0 - p) * g - 1e-12);
    }
  }
}

TEST(eigensolver, lambda_max_grows_with_dimension) {
  for (double p : {0.3, 0.7, 0.95}) {
    double previous = 0.0;
    for (std::size_t dim : {4u, 12u, 50u, 150u}) {
      const double value = block_scan(p, dim, 2).lambda_max;
      EXPECT_GE(value, previous - 1e-14) << p << ' ' << dim;
      previous = value;
    }
  }
}

TEST(eigensolver, full_space_operator_is_symmetric_and_matches_blocks) {
  for (std::size_t dim = 1; dim <= 4; ++dim) {
    const auto full = full_space_operator(0.6, dim);
    EXPECT_LT((full - full.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  }
  const LogFactorialTable table(16);
  const auto full = full_space_operator(0.6, 3);
  const auto block = build_r(0.6, 0, 3, table);
  for (int n = 0; n < 3; ++n) {
    for (int m = 0; m < 3; ++m) {
      EXPECT_NEAR(full(n * 3 + n, m * 3 + m), block.entries(n, m), 1e-15);
    }
  }
  EXPECT_THROW(full_space_operator(0.5, 7), DomainError);
  EXPECT_THROW(full_space_operator(0.5, 0), DomainError);
}

TEST(eigensolver, small_n_crosscheck_agrees_with_block_scan) {
  for (std::size_t dim = 2; dim <= 4; ++dim) {
    for (int i = 0; i <= 10; ++i) {
      const double p = 0.1 * i;
      const double blockwise = block_scan(p, dim, dim - 1).lambda_max;
      ASSERT_NEAR(small_n_crosscheck(p, dim), blockwise, 1e-10) << dim << ' ' << p;
    }
  }
}
