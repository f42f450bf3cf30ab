#include "mdm/r_operators.hpp"

#include <cmath>
#include <cstdlib>
#include <ostream>
#include <string>

#include "mdm/csv.hpp"
#include "mdm/errors.hpp"

namespace mdm {

namespace {

void check_dim(std::size_t dim) {
  if (dim == 0) throw DomainError("block dimension must be at least 1");
}

void check_weight(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("weight p must lie in [0, 1], got " + format_double(p));
  }
}

}  // namespace

RBlock build_rf(int L, std::size_t dim, const LogFactorialTable& table) {
  check_dim(dim);
  const auto abs_l = static_cast<std::size_t>(std::abs(L));
  table.require(2 * (dim - 1) + abs_l);
  RBlock block{L, RKind::F, 1.0, Eigen::MatrixXd(dim, dim)};
  for (std::size_t n = 0; n < dim; ++n) {
    for (std::size_t m = 0; m <= n; ++m) {
      const double value = table.sqrt_binom_product(n, m, abs_l);
      block.entries(n, m) = value;
      block.entries(m, n) = value;
    }
  }
  return block;
}

RBlock build_rg(int L, std::size_t dim) {
  check_dim(dim);
  const int shift = L > 0 ? L : 0;
  RBlock block{L, RKind::G, 0.0, Eigen::MatrixXd::Zero(dim, dim)};
  for (std::size_t n = 0; n < dim; ++n) {
    block.entries(n, n) = std::ldexp(1.0, -(static_cast<int>(n) + shift + 1));
  }
  return block;
}

RBlock combine(double p, const RBlock& rf, const RBlock& rg) {
  check_weight(p);
  RBlock block{rf.L, RKind::Combined, p, p * rf.entries + (1.0 - p) * rg.entries};
  return block;
}

RBlock build_r(double p, int L, std::size_t dim, const LogFactorialTable& table) {
  check_weight(p);
  return combine(p, build_rf(L, dim, table), build_rg(L, dim));
}

BlockSet::BlockSet(std::size_t dim, std::size_t l_max, bool include_positive)
    : dim_(dim), l_max_(l_max), include_positive_(include_positive) {
  check_dim(dim);
  const auto table = LogFactorialTable::for_blocks(dim, l_max);
  labels_.push_back(0);
  for (std::size_t l = 1; l <= l_max; ++l) {
    labels_.push_back(-static_cast<int>(l));
    if (include_positive) labels_.push_back(static_cast<int>(l));
  }
  // R_F depends on |L| only, but each label keeps its own copy so lookups stay trivial.
  for (int L : labels_) {
    rf_.push_back(build_rf(L, dim, table));
    rg_.push_back(build_rg(L, dim));
  }
}

std::size_t BlockSet::index_of(int L) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == L) return i;
  }
  throw ConfigError("block L = " + std::to_string(L) + " is not part of this block set",
                    static_cast<std::size_t>(std::abs(L)));
}

const RBlock& BlockSet::rf(int L) const { return rf_[index_of(L)]; }

const RBlock& BlockSet::rg(int L) const { return rg_[index_of(L)]; }

RBlock BlockSet::combined(double p, int L) const {
  const std::size_t i = index_of(L);
  return combine(p, rf_[i], rg_[i]);
}

void write_block_csv(std::ostream& out, const RBlock& block) {
  CsvWriter csv(out);
  for (Eigen::Index r = 0; r < block.entries.rows(); ++r) {
    for (Eigen::Index c = 0; c < block.entries.cols(); ++c) csv.field(block.entries(r, c));
    csv.end_row();
  }
}

}  // namespace mdm
