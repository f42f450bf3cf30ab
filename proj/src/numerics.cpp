#include "mdm/numerics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mdm/errors.hpp"

namespace mdm {

LogFactorialTable::LogFactorialTable(std::size_t capacity) : values_(capacity < 2 ? 2 : capacity) {
  values_[0] = 0.0;
  values_[1] = 0.0;
  for (std::size_t k = 2; k < values_.size(); ++k) {
    values_[k] = std::lgamma(static_cast<double>(k) + 1.0);
  }
}

std::size_t LogFactorialTable::capacity_for(std::size_t dim, std::size_t l_max) {
  return 2 * dim + l_max + 2;
}

LogFactorialTable LogFactorialTable::for_blocks(std::size_t dim, std::size_t l_max) {
  return LogFactorialTable(capacity_for(dim, l_max));
}

void LogFactorialTable::require(std::size_t max_k) const {
  if (max_k >= values_.size()) {
    throw ConfigError("log-factorial table capacity " + std::to_string(values_.size()) +
                          " too small; need at least " + std::to_string(max_k + 1),
                      max_k + 1);
  }
}

double LogFactorialTable::log_factorial(std::size_t k) const {
  require(k);
  return values_[k];
}

double LogFactorialTable::sqrt_binom_product(std::size_t n, std::size_t m, std::size_t L) const {
  const std::size_t total = n + m + L;
  require(total);
  // a and b swap under n <-> m; floating-point addition is commutative, so the
  // result is bit-identical for (n, m) and (m, n).
  const double a = values_[n] + values_[m + L];
  const double b = values_[m] + values_[n + L];
  const double log_value =
      0.5 * (2.0 * values_[total] - (a + b)) - static_cast<double>(total + 1) * std::numbers::ln2;
  return std::exp(log_value);
}

}  // namespace mdm
