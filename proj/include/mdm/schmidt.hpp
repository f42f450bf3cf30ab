#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mdm/numerics.hpp"

namespace mdm {

// Photon-number-correlated two-mode pure state sum_n c_n |n, n>, truncated to
// n < dim(). Coefficients are nonnegative and unit norm.
class SchmidtState {
 public:
  // Validates: nonempty, every c_n >= 0, |sum c_n^2 - 1| <= 1e-12.
  static SchmidtState from_coefficients(std::vector<double> coeffs);

  // Rescales to unit norm. Entries in [-1e-12, 0) are clamped to zero (power
  // iteration noise); anything more negative, or an all-zero vector, throws
  // DomainError.
  static SchmidtState normalized(std::vector<double> coeffs);

  static SchmidtState vacuum(std::size_t dim = 1);

  std::span<const double> coeffs() const { return coeffs_; }
  std::size_t dim() const { return coeffs_.size(); }
  double operator[](std::size_t n) const { return coeffs_[n]; }

  // Same state with zeros appended up to new_dim.
  SchmidtState padded(std::size_t new_dim) const;

 private:
  explicit SchmidtState(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {}

  std::vector<double> coeffs_;
};

// A family state truncated to `dim` levels and renormalized. `leakage` is the
// probability mass 1 - sum_{n<dim} c_n^2 of the untruncated state that was cut.
struct TruncatedState {
  SchmidtState state;
  double leakage;
};

// Two-mode squeezed vacuum, c_n = sqrt(1 - lambda^2) lambda^n, lambda = tanh r.
TruncatedState tmsv(double lambda, std::size_t dim);

// TMSV with one photon subtracted from each mode,
// c_n = sqrt((1 - x^2)^3 / (1 + x^2)) (n + 1) x^n, where x = T * lambda.
TruncatedState photon_subtracted(double x, std::size_t dim);

// Teleportation (output) fidelity sum_{m,n} C(m+n, n) c_m c_n / 2^(m+n+1).
// Summed diagonal by diagonal in m + n so the result does not depend on how
// callers are scheduled.
double fidelity_output(const SchmidtState& state);
double fidelity_output(const SchmidtState& state, const LogFactorialTable& table);

// Estimation fidelity sum_n c_n^2 / 2^(n+1).
double fidelity_estimation(const SchmidtState& state);

// State files: '#' lines are comments/header, data lines are "n c_n" with n
// contiguous from 0. Values are written with 17 significant digits.
using StateHeader = std::vector<std::pair<std::string, std::string>>;

void save_state(const SchmidtState& state, const std::filesystem::path& path,
                const StateHeader& header = {});
SchmidtState load_state(const std::filesystem::path& path);

// Stream variants used by the file functions (and handy in tests).
void write_state(std::ostream& out, const SchmidtState& state, const StateHeader& header = {});
SchmidtState read_state(std::istream& in);

}  // namespace mdm
