#include "mdm/tradeoff.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "mdm/csv.hpp"
#include "mdm/errors.hpp"

namespace mdm {

namespace {

constexpr double kFidelityMatchTolerance = 1e-4;

// Output fidelity of the L = 0 Perron vector at weight p.
double l0_output_fidelity(double p, const RBlock& rf0, const RBlock& rg0, const EigOptions& eig) {
  const EigResult result = dominant_eig(combine(p, rf0, rg0), eig);
  return result.eigenvector.dot(rf0.entries * result.eigenvector);
}

}  // namespace

FidelityPair bk_fidelities(double r) {
  if (!(r >= 0.0)) throw DomainError("squeezing r must be nonnegative, got " + format_double(r));
  const double cosh_r = std::cosh(r);
  return {1.0 / (1.0 + std::exp(-2.0 * r)), 1.0 / (1.0 + cosh_r * cosh_r)};
}

double gaussian_tradeoff_g(double F) {
  if (!(F >= 0.5 && F < 1.0)) {
    throw DomainError("output fidelity must lie in [0.5, 1), got " + format_double(F));
  }
  const double q = 4.0 * F * (1.0 - F);
  return q / (q + 1.0);
}

FidelityPair photon_subtracted_fidelities(double x) {
  if (!(x >= 0.0 && x < 1.0)) {
    throw DomainError("photon-subtraction parameter must lie in [0, 1), got " + format_double(x));
  }
  const double x2 = x * x;
  const double one_plus_x = 1.0 + x;
  const double f = one_plus_x * one_plus_x * one_plus_x * (2.0 - 2.0 * x + x2) / (4.0 * (1.0 + x2));
  const double ratio = (1.0 - x2) / (2.0 - x2);
  const double g = 2.0 * ((2.0 + x2) / (1.0 + x2)) * ratio * ratio * ratio;
  return {f, g};
}

std::vector<double> linear_grid(double start, double stop, std::size_t count) {
  std::vector<double> grid;
  grid.reserve(count);
  if (count == 1) {
    grid.push_back(start);
    return grid;
  }
  for (std::size_t i = 0; i < count; ++i) {
    if (i + 1 == count) {
      grid.push_back(stop);
    } else {
      const double t = static_cast<double>(i) / static_cast<double>(count - 1);
      grid.push_back(start + (stop - start) * t);
    }
  }
  return grid;
}

TradeoffPoint tradeoff_point(double p, const BlockSet& blocks, const EigOptions& eig) {
  const BlockScanResult scan = block_scan(p, blocks, eig);
  const Eigen::VectorXd& v = scan.best.eigenvector;
  TradeoffPoint point;
  point.p = p;
  point.lambda_max = scan.lambda_max;
  point.F = v.dot(blocks.rf(scan.L_star).entries * v);
  point.G = v.dot(blocks.rg(scan.L_star).entries * v);
  point.L_star = scan.L_star;
  point.dim = blocks.dim();
  point.iterations = scan.total_iterations;
  point.degeneracy_ratio = scan.degeneracy_ratio;
  point.optimal_state = scan.optimal_state;
  return point;
}

TradeoffPoint tradeoff_point(double p, const BlockSet& blocks, const TradeoffOptions& options) {
  try {
    return tradeoff_point(p, blocks, options.scan.eig);
  } catch (const ConvergenceError&) {
    if (options.retry_factor <= 1) throw;
  }
  EigOptions larger = options.scan.eig;
  larger.max_iter *= options.retry_factor;
  TradeoffPoint point = tradeoff_point(p, blocks, larger);
  point.retried = true;
  return point;
}

std::vector<TradeoffPoint> scan_p(std::span<const double> p_grid, const BlockSet& blocks,
                                  const TradeoffOptions& options) {
  std::vector<double> grid(p_grid.begin(), p_grid.end());
  for (double p : grid) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw DomainError("p grid values must lie in [0, 1], got " + format_double(p));
    }
  }
  std::sort(grid.begin(), grid.end());

  std::vector<TradeoffPoint> points(grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      try {
        points[i] = tradeoff_point(grid[i], blocks, options);
      } catch (const std::exception& e) {
        TradeoffPoint failed;
        failed.p = grid[i];
        failed.dim = blocks.dim();
        failed.ok = false;
        failed.error = e.what();
        failed.lambda_max = failed.F = failed.G = std::numeric_limits<double>::quiet_NaN();
        points[i] = std::move(failed);
      }
    }
  };

  unsigned threads = options.threads == 0 ? std::thread::hardware_concurrency() : options.threads;
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(grid.size())));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return points;
}

std::vector<TradeoffPoint> scan_p(std::span<const double> p_grid, std::size_t dim,
                                  const TradeoffOptions& options) {
  const BlockSet blocks(dim, options.l_max, options.scan.verify_blocks);
  return scan_p(p_grid, blocks, options);
}

std::vector<DeltaG> delta_g_curve(std::span<const TradeoffPoint> points) {
  std::vector<DeltaG> curve;
  curve.reserve(points.size());
  for (const auto& point : points) {
    if (!point.ok) {
      curve.push_back({point.F, std::numeric_limits<double>::quiet_NaN()});
      continue;
    }
    // The p = 0 Perron vector can land an ulp below F = 1/2.
    const double f = std::max(point.F, 0.5);
    curve.push_back({point.F, point.G - gaussian_tradeoff_g(f)});
  }
  return curve;
}

double max_output_fidelity(std::size_t dim, const EigOptions& eig) {
  const auto table = LogFactorialTable::for_blocks(dim, 0);
  return dominant_eig(build_rf(0, dim, table), eig).eigenvalue;
}

TradeoffPoint find_p_for_f(double f_target, std::size_t dim, const TradeoffOptions& options) {
  if (!(f_target >= 0.5)) {
    throw DomainError("target output fidelity must be at least 0.5, got " + format_double(f_target));
  }
  const auto table = LogFactorialTable::for_blocks(dim, 0);
  const RBlock rf0 = build_rf(0, dim, table);
  const RBlock rg0 = build_rg(0, dim);
  const EigOptions& eig = options.scan.eig;

  double lo = 0.0;
  double hi = 1.0;
  double p_found = 0.0;
  const double f_lo = l0_output_fidelity(lo, rf0, rg0, eig);
  const double f_hi = l0_output_fidelity(hi, rf0, rg0, eig);
  if (std::abs(f_lo - f_target) <= kFidelityMatchTolerance) {
    p_found = lo;
  } else if (f_target > f_hi + kFidelityMatchTolerance) {
    throw RangeError("output fidelity " + format_double(f_target) + " is not reachable at N = " +
                         std::to_string(dim) + "; maximum is " + format_double(f_hi),
                     f_hi);
  } else if (std::abs(f_hi - f_target) <= kFidelityMatchTolerance) {
    p_found = hi;
  } else {
    p_found = 0.5 * (lo + hi);
    for (int step = 0; step < 200; ++step) {
      p_found = 0.5 * (lo + hi);
      const double f = l0_output_fidelity(p_found, rf0, rg0, eig);
      if (std::abs(f - f_target) <= kFidelityMatchTolerance) break;
      (f < f_target ? lo : hi) = p_found;
    }
  }
  const BlockSet blocks(dim, options.l_max, options.scan.verify_blocks);
  return tradeoff_point(p_found, blocks, options);
}

std::vector<SchmidtDelta> schmidt_delta(const SchmidtState& state, double f_match) {
  if (!(f_match >= 0.5 && f_match < 1.0)) {
    throw DomainError("matching output fidelity must lie in [0.5, 1), got " +
                      format_double(f_match));
  }
  // e^-2r = 1/F - 1 and lambda = tanh r reduce to lambda = 2F - 1.
  const double lambda = 2.0 * f_match - 1.0;
  const SchmidtState reference = tmsv(lambda, state.dim()).state;
  std::vector<SchmidtDelta> rows(state.dim());
  for (std::size_t n = 0; n < state.dim(); ++n) {
    rows[n] = {n, state[n], reference[n], state[n] - reference[n]};
  }
  return rows;
}

}  // namespace mdm
