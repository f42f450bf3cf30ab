#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mdm/r_operators.hpp"
#include "mdm/schmidt.hpp"

namespace mdm {

struct EigOptions {
  double tol = 1e-12;
  std::size_t max_iter = 100000;
};

struct EigResult {
  double eigenvalue = 0.0;
  Eigen::VectorXd eigenvector;  // unit norm, largest-magnitude entry positive
  std::size_t iterations = 0;
  double residual = 0.0;        // max-norm of R v - lambda v
};

// Dominant eigenpair by power iteration from the uniform positive vector.
// Converged once |lambda_k - lambda_{k-1}| <= tol * lambda_k and the residual
// is <= 10 * tol. Throws ConvergenceError after max_iter iterations.
EigResult dominant_eig(const RBlock& block, const EigOptions& options = {});

struct BlockEigenvalue {
  int L = 0;
  double eigenvalue = 0.0;
  std::size_t iterations = 0;
  double residual = 0.0;
};

struct BlockScanResult {
  double p = 0.0;
  std::vector<BlockEigenvalue> blocks;  // in scan order 0, -1, (+1), -2, ...
  int L_star = 0;
  double lambda_max = 0.0;
  // Largest eigenvalue among the other blocks, and its ratio to lambda_max.
  // A ratio near 1 means the winning block is nearly degenerate with another
  // one (this happens as p -> 0), so the eigenvector is not well determined.
  double runner_up = 0.0;
  double degeneracy_ratio = 0.0;
  EigResult best;                          // eigenpair of block L_star
  std::optional<SchmidtState> optimal_state;  // set when L_star == 0
  std::size_t total_iterations = 0;
};

struct ScanOptions {
  EigOptions eig;
  bool verify_blocks = false;  // also diagonalize the +L blocks
};

// Diagonalizes every block of `blocks` at weight p and picks the largest
// eigenvalue. Ties go to L = 0, then to smaller |L|, then to -L. A
// ConvergenceError from any block is rethrown with (p, L) in its message.
BlockScanResult block_scan(double p, const BlockSet& blocks, const EigOptions& options = {});

BlockScanResult block_scan(double p, std::size_t dim, std::size_t l_max,
                           const ScanOptions& options = {});

// Largest eigenvalue of R(p) on the full truncated two-mode space
// {|n_in, n_out> : n_in, n_out < dim}, assembled entry by entry from the
// operator-sum form of R_F and R_G and diagonalized densely (no block
// structure, no power iteration). dim <= 6.
double small_n_crosscheck(double p, std::size_t dim);

// The full dim^2 x dim^2 matrix used by small_n_crosscheck, index n_in * dim + n_out.
Eigen::MatrixXd full_space_operator(double p, std::size_t dim);

}  // namespace mdm
