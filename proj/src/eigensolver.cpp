#include "mdm/eigensolver.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "mdm/csv.hpp"
#include "mdm/errors.hpp"

namespace mdm {

namespace {

void canonicalize_sign(Eigen::VectorXd& v) {
  Eigen::Index largest = 0;
  v.cwiseAbs().maxCoeff(&largest);
  if (v(largest) < 0.0) v = -v;
}

// Strict "better" relation with the documented tie-break.
bool beats(const BlockEigenvalue& candidate, const BlockEigenvalue& incumbent) {
  if (candidate.eigenvalue != incumbent.eigenvalue) {
    return candidate.eigenvalue > incumbent.eigenvalue;
  }
  const int a = std::abs(candidate.L);
  const int b = std::abs(incumbent.L);
  if (a != b) return a < b;
  return candidate.L < incumbent.L;
}

}  // namespace

EigResult dominant_eig(const RBlock& block, const EigOptions& options) {
  if (!(options.tol > 0.0)) throw DomainError("tolerance must be positive");
  const Eigen::Index n = block.entries.rows();
  const Eigen::MatrixXd& a = block.entries;

  Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  Eigen::VectorXd w(n);
  double lambda_prev = 0.0;
  double lambda = 0.0;
  double residual = 0.0;

  for (std::size_t it = 1; it <= options.max_iter; ++it) {
    w.noalias() = a * v;
    lambda = v.dot(w);
    residual = (w - lambda * v).cwiseAbs().maxCoeff();
    const bool settled = it > 1 && std::abs(lambda - lambda_prev) <= options.tol * lambda;
    if ((settled && residual <= 10.0 * options.tol) || (lambda == 0.0 && residual == 0.0)) {
      canonicalize_sign(v);
      return {lambda, std::move(v), it, residual};
    }
    lambda_prev = lambda;
    const double norm = w.norm();
    if (norm == 0.0) {
      // v lies in the kernel; the zero matrix case is caught above.
      throw ConvergenceError("power iteration collapsed to the zero vector", lambda, residual, it);
    }
    v = w / norm;
  }
  throw ConvergenceError("power iteration did not converge in " +
                             std::to_string(options.max_iter) + " iterations (lambda " +
                             format_double(lambda) + ", residual " + format_double(residual) + ")",
                         lambda, residual, options.max_iter);
}

BlockScanResult block_scan(double p, const BlockSet& blocks, const EigOptions& options) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("weight p must lie in [0, 1], got " + format_double(p));
  }
  BlockScanResult result;
  result.p = p;
  std::size_t best_index = 0;
  for (int L : blocks.labels()) {
    EigResult eig;
    try {
      eig = dominant_eig(blocks.combined(p, L), options);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError("p = " + format_double(p) + ", L = " + std::to_string(L) + ": " +
                                 e.what(),
                             e.last_eigenvalue(), e.last_residual(), e.iterations());
    }
    BlockEigenvalue entry{L, eig.eigenvalue, eig.iterations, eig.residual};
    result.total_iterations += eig.iterations;
    result.blocks.push_back(entry);
    if (result.blocks.size() == 1 || beats(entry, result.blocks[best_index])) {
      best_index = result.blocks.size() - 1;
      result.best = std::move(eig);
    }
  }

  const BlockEigenvalue& winner = result.blocks[best_index];
  result.L_star = winner.L;
  result.lambda_max = winner.eigenvalue;
  result.runner_up = 0.0;
  for (std::size_t i = 0; i < result.blocks.size(); ++i) {
    if (i != best_index) result.runner_up = std::max(result.runner_up, result.blocks[i].eigenvalue);
  }
  result.degeneracy_ratio = result.lambda_max > 0.0 ? result.runner_up / result.lambda_max : 0.0;
  if (result.L_star == 0) {
    const auto& v = result.best.eigenvector;
    result.optimal_state = SchmidtState::normalized(std::vector<double>(v.data(), v.data() + v.size()));
  }
  return result;
}

BlockScanResult block_scan(double p, std::size_t dim, std::size_t l_max,
                           const ScanOptions& options) {
  const BlockSet blocks(dim, l_max, options.verify_blocks);
  return block_scan(p, blocks, options.eig);
}

Eigen::MatrixXd full_space_operator(double p, std::size_t dim) {
  if (dim == 0 || dim * dim > 36) {
    throw DomainError("full-space cross-check supports 1 <= dim <= 6");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("weight p must lie in [0, 1], got " + format_double(p));
  }
  const LogFactorialTable table(2 * dim + 1);
  const auto index = [dim](std::size_t in, std::size_t out) {
    return static_cast<Eigen::Index>(in * dim + out);
  };
  const auto total = static_cast<Eigen::Index>(dim * dim);
  Eigen::MatrixXd rf = Eigen::MatrixXd::Zero(total, total);
  Eigen::MatrixXd rg = Eigen::MatrixXd::Zero(total, total);

  // R_F = sum_K K!/2^(K+1) sum_{n,m<=K} |n><K-m| (x) |m><K-n| / sqrt(n!(K-m)!m!(K-n)!).
  // Matrix element <n, m| R_F |n2, m2> with n2 = K - m, m2 = K - n.
  for (std::size_t n = 0; n < dim; ++n) {
    for (std::size_t m = 0; m < dim; ++m) {
      for (std::size_t m2 = 0; m2 < dim; ++m2) {
        const std::size_t k = n + m2;
        if (k < m) continue;
        const std::size_t n2 = k - m;
        if (n2 >= dim) continue;
        const double log_value =
            table.log_factorial(k) - static_cast<double>(k + 1) * std::numbers::ln2 -
            0.5 * (table.log_factorial(n) + table.log_factorial(n2) + table.log_factorial(m) +
                   table.log_factorial(m2));
        rf(index(n, m), index(n2, m2)) = std::exp(log_value);
      }
    }
  }
  // R_G = sum_n 2^-(n+1) |n><n| (x) 1.
  for (std::size_t n = 0; n < dim; ++n) {
    for (std::size_t m = 0; m < dim; ++m) {
      rg(index(n, m), index(n, m)) = std::ldexp(1.0, -static_cast<int>(n + 1));
    }
  }
  return p * rf + (1.0 - p) * rg;
}

double small_n_crosscheck(double p, std::size_t dim) {
  const Eigen::MatrixXd r = full_space_operator(p, dim);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(r, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("dense eigensolver failed on the full-space operator", 0.0, 0.0, 0);
  }
  return solver.eigenvalues().maxCoeff();
}

}  // namespace mdm
