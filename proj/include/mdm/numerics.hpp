#pragma once

#include <cstddef>
#include <vector>

namespace mdm {

// Precomputed ln(k!) for k = 0 .. capacity-1.
//
// All factorial-heavy quantities (binomials with n+m+L up to ~1000) are
// evaluated in the log domain against this table; C(1000, 500) alone is far
// outside the range of double. The table is fixed at construction and never
// grows, so a single instance can be shared read-only across threads.
class LogFactorialTable {
 public:
  explicit LogFactorialTable(std::size_t capacity);

  // Capacity needed for blocks of dimension `dim` and |L| <= l_max.
  static std::size_t capacity_for(std::size_t dim, std::size_t l_max);

  // Table sized via capacity_for(dim, l_max).
  static LogFactorialTable for_blocks(std::size_t dim, std::size_t l_max);

  std::size_t capacity() const { return values_.size(); }

  // ln(k!). Throws ConfigError if k >= capacity().
  double log_factorial(std::size_t k) const;

  // sqrt(C(n+m+L, n) * C(n+m+L, m)) / 2^(L+n+m+1), the (n, m) entry of the
  // output-fidelity operator restricted to photon-number-difference block L.
  // Exactly symmetric in (n, m).
  double sqrt_binom_product(std::size_t n, std::size_t m, std::size_t L) const;

  // Throws ConfigError unless ln(k!) is available for every k <= max_k.
  void require(std::size_t max_k) const;

 private:
  std::vector<double> values_;
};

}  // namespace mdm
