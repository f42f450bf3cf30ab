#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "mdm/numerics.hpp"

namespace mdm {

enum class RKind { F, G, Combined };

// Restriction of R_F, R_G or R(p) = p R_F + (1 - p) R_G to the
// photon-number-difference block L (n_in - n_out = L), truncated to `dim`
// basis vectors. Block +L is spanned by |n+L, n>, block -L by |n, n+L>.
struct RBlock {
  int L = 0;
  RKind kind = RKind::Combined;
  double p = 0.0;  // meaningful for RKind::Combined only
  Eigen::MatrixXd entries;

  std::size_t dim() const { return static_cast<std::size_t>(entries.rows()); }
};

// (R_F)_{nm} = sqrt(C(n+m+|L|, n) C(n+m+|L|, m)) / 2^(|L|+n+m+1); identical for +L and -L.
RBlock build_rf(int L, std::size_t dim, const LogFactorialTable& table);

// diag(1 / 2^(n+L+1)) for L >= 0 and diag(1 / 2^(n+1)) for L < 0.
RBlock build_rg(int L, std::size_t dim);

// p R_F + (1 - p) R_G on block L. Throws DomainError unless 0 <= p <= 1.
RBlock build_r(double p, int L, std::size_t dim, const LogFactorialTable& table);

// Same combination from already-built F and G blocks (must share L and dim).
RBlock combine(double p, const RBlock& rf, const RBlock& rg);

// The F and G blocks for L = 0, -1, ..., -l_max (and +1 .. +l_max when
// `include_positive`), built once and reused across many p values.
class BlockSet {
 public:
  BlockSet(std::size_t dim, std::size_t l_max, bool include_positive);

  std::size_t dim() const { return dim_; }
  std::size_t l_max() const { return l_max_; }
  bool includes_positive() const { return include_positive_; }

  // Block labels in scan order: 0, -1, +1, -2, +2, ... (positives only if enabled).
  const std::vector<int>& labels() const { return labels_; }

  const RBlock& rf(int L) const;
  const RBlock& rg(int L) const;
  RBlock combined(double p, int L) const;

 private:
  std::size_t index_of(int L) const;

  std::size_t dim_;
  std::size_t l_max_;
  bool include_positive_;
  std::vector<int> labels_;
  std::vector<RBlock> rf_;
  std::vector<RBlock> rg_;
};

// Debug dump: one matrix row per line, comma separated, 17 significant digits.
void write_block_csv(std::ostream& out, const RBlock& block);

}  // namespace mdm
