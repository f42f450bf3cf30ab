#include "mdm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "mdm/errors.hpp"
#include "mdm/numerics.hpp"

namespace mdm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// L_n(x), L_{n-1}(x) and sum_{k<n} L_k(x)^2 by the three-term recurrence,
// rescaled as needed: the true values are current and previous times
// exp(log_scale), and sum_squares times exp(2 log_scale).
struct LaguerrePair {
  double current = 0.0;
  double previous = 0.0;
  double sum_squares = 0.0;
  double log_scale = 0.0;
};

LaguerrePair laguerre(std::size_t n, double x) {
  LaguerrePair pair{1.0, 0.0, 0.0, 0.0};
  for (std::size_t k = 0; k < n; ++k) {
    const double kd = static_cast<double>(k);
    pair.sum_squares += pair.current * pair.current;
    const double next = ((2.0 * kd + 1.0 - x) * pair.current - kd * pair.previous) / (kd + 1.0);
    pair.previous = pair.current;
    pair.current = next;
    const double mag = std::max(std::abs(pair.current), std::abs(pair.previous));
    if (mag > 1e100) {
      pair.current /= 1e100;
      pair.previous /= 1e100;
      pair.sum_squares /= 1e200;
      pair.log_scale += 100.0 * std::numbers::ln10;
    }
  }
  return pair;
}

// log(sum_i exp(terms_i)); empty or all -inf gives -inf.
double log_sum_exp(const std::vector<double>& terms) {
  double peak = kNegInf;
  for (double t : terms) peak = std::max(peak, t);
  if (peak == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - peak);
  return peak + std::log(sum);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

QuadratureRule laguerre_rule(std::size_t order) {
  if (order == 0) throw DomainError("quadrature order must be at least 1");
  const auto n = static_cast<Eigen::Index>(order);

  // Golub-Welsch starting values: eigenvalues of the Jacobi matrix of the
  // Laguerre recurrence (diagonal 2k+1, off-diagonal k).
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max<Eigen::Index>(n - 1, 0));
  for (Eigen::Index k = 0; k < n; ++k) diag(k) = 2.0 * static_cast<double>(k) + 1.0;
  for (Eigen::Index k = 1; k < n; ++k) sub(k - 1) = static_cast<double>(k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("tridiagonal eigensolver failed for Laguerre nodes", 0.0, 0.0, 0);
  }

  QuadratureRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  rule.log_weights.resize(order);
  const double nd = static_cast<double>(order);
  for (std::size_t i = 0; i < order; ++i) {
    double x = solver.eigenvalues()(static_cast<Eigen::Index>(i));
    // Newton on L_n: L_n / L_n' = x L_n / (n (L_n - L_{n-1})); the scale cancels.
    for (int step = 0; step < 20; ++step) {
      const LaguerrePair l = laguerre(order, x);
      const double dx = x * l.current / (nd * (l.current - l.previous));
      x -= dx;
      if (std::abs(dx) <= 4.0 * std::numeric_limits<double>::epsilon() * x) break;
    }
    // Christoffel form w = 1 / sum_{k<n} L_k(x)^2.
    const LaguerrePair l = laguerre(order, x);
    const double log_w = -(std::log(l.sum_squares) + 2.0 * l.log_scale);
    rule.nodes[i] = 0.5 * x;
    rule.log_weights[i] = log_w - std::numbers::ln2;
    rule.weights[i] = std::exp(rule.log_weights[i]);
  }
  return rule;
}

OracleFidelities oracle_fidelities(const SchmidtState& state, std::size_t order) {
  return oracle_fidelities(state, laguerre_rule(order));
}

OracleFidelities oracle_fidelities(const SchmidtState& state, const QuadratureRule& rule) {
  const auto c = state.coeffs();
  const LogFactorialTable table(c.size() + 1);
  OracleFidelities result;
  result.precision_warning = rule.order() < state.dim();

  std::vector<double> g_terms(c.size());
  std::vector<double> h_terms(c.size());
  for (std::size_t i = 0; i < rule.order(); ++i) {
    const double t = rule.nodes[i];
    const double log_t = std::log(t);
    for (std::size_t n = 0; n < c.size(); ++n) {
      if (c[n] == 0.0) {
        g_terms[n] = h_terms[n] = kNegInf;
        continue;
      }
      const double base = static_cast<double>(n) * log_t - table.log_factorial(n);
      g_terms[n] = std::log(c[n]) + base;
      h_terms[n] = 2.0 * std::log(c[n]) + base;
    }
    const double log_w = rule.log_weights[i];
    result.F += std::exp(log_w + 2.0 * log_sum_exp(g_terms));
    result.G += std::exp(log_w + log_sum_exp(h_terms));
  }
  return result;
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : base_(splitmix64(splitmix64(seed) ^ (stream * 0xD1B54A32D192ED03ULL))) {}

double CounterRng::uniform() {
  const std::uint64_t bits = splitmix64(base_ + 0x9E3779B97F4A7C15ULL * counter_++);
  // 53 random bits, offset by half a step so 0 is never produced.
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

McFidelities mc_fidelities(const SchmidtState& state, std::size_t samples, std::uint64_t seed) {
  if (samples < 10000) throw DomainError("Monte Carlo oracle needs at least 10^4 samples");
  const auto c = state.coeffs();
  const std::size_t dim = c.size();
  const std::size_t components = 2 * dim - 1;
  const LogFactorialTable table(components + 1);
  const double log_components = std::log(static_cast<double>(components));

  std::vector<double> log_c(dim);
  for (std::size_t n = 0; n < dim; ++n) log_c[n] = c[n] > 0.0 ? std::log(c[n]) : kNegInf;

  std::vector<double> g_terms(dim), h_terms(dim), q_terms(components);
  double sum_f = 0.0, sum_f2 = 0.0, sum_g = 0.0, sum_g2 = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    CounterRng rng(seed, i);
    const auto k = std::min(components - 1,
                            static_cast<std::size_t>(rng.uniform() * static_cast<double>(components)));
    // Gamma(k + 1, rate 2) as a sum of k + 1 exponentials; the product of
    // uniforms is flushed to a log every few factors to stay in range.
    double log_product = 0.0;
    double product = 1.0;
    for (std::size_t j = 0; j <= k; ++j) {
      product *= rng.uniform();
      if (product < 1e-280) {
        log_product += std::log(product);
        product = 1.0;
      }
    }
    log_product += std::log(product);
    const double t = -0.5 * log_product;
    const double log_t = std::log(t);

    // Mixture density times e^{2t}: (1/K) sum_k 2^(k+1) t^k / k!.
    for (std::size_t j = 0; j < components; ++j) {
      const double jd = static_cast<double>(j);
      q_terms[j] = (jd + 1.0) * std::numbers::ln2 + jd * log_t - table.log_factorial(j);
    }
    const double log_q = log_sum_exp(q_terms) - log_components;
    for (std::size_t n = 0; n < dim; ++n) {
      const double base = static_cast<double>(n) * log_t - table.log_factorial(n);
      g_terms[n] = log_c[n] + base;
      h_terms[n] = 2.0 * log_c[n] + base;
    }
    const double x_f = std::exp(2.0 * log_sum_exp(g_terms) - log_q);
    const double x_g = std::exp(log_sum_exp(h_terms) - log_q);
    sum_f += x_f;
    sum_f2 += x_f * x_f;
    sum_g += x_g;
    sum_g2 += x_g * x_g;
  }

  const double count = static_cast<double>(samples);
  McFidelities result;
  result.F = sum_f / count;
  result.G = sum_g / count;
  const double var_f = std::max(0.0, sum_f2 / count - result.F * result.F);
  const double var_g = std::max(0.0, sum_g2 / count - result.G * result.G);
  result.F_stderr = std::sqrt(var_f * count / (count - 1.0) / count);
  result.G_stderr = std::sqrt(var_g * count / (count - 1.0) / count);
  return result;
}

}  // namespace mdm
