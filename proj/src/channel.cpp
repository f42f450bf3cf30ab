#include "mdm/channel.hpp"

#include <cmath>
#include <limits>

#include "mdm/csv.hpp"
#include "mdm/errors.hpp"

namespace mdm {

namespace {

// Transmission fidelity minus p, written so that it keeps full relative
// precision at large r where both fidelities are within 1e-20 of their limits.
double gain_over_direct(double p, double r) {
  const double e = std::exp(-2.0 * r);
  const double cosh_r = std::cosh(r);
  const double f_deficit = e / (1.0 + e);            // 1 - F_BK
  const double g_bk = 1.0 / (1.0 + cosh_r * cosh_r);  // G_BK
  return (1.0 - p) * g_bk - p * f_deficit;
}

}  // namespace

GaussChannelResult gauss_channel_fidelity(double p, double r_cap) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("transmission probability must lie in [0, 1], got " + format_double(p));
  }
  if (!(r_cap > 0.0)) throw DomainError("squeezing cap must be positive");

  const auto steps = static_cast<std::size_t>(std::ceil(r_cap / 0.01));
  const double h = r_cap / static_cast<double>(steps);
  std::size_t best = 0;
  double best_value = gain_over_direct(p, 0.0);
  for (std::size_t i = 1; i <= steps; ++i) {
    const double value = gain_over_direct(p, static_cast<double>(i) * h);
    if (value > best_value) {
      best_value = value;
      best = i;
    }
  }

  double a = best == 0 ? 0.0 : static_cast<double>(best - 1) * h;
  double b = best == steps ? r_cap : static_cast<double>(best + 1) * h;
  constexpr double inv_phi = 0.6180339887498948482;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = gain_over_direct(p, x1);
  double f2 = gain_over_direct(p, x2);
  while (b - a > 1e-8) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = gain_over_direct(p, x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = gain_over_direct(p, x1);
    }
  }
  double r_star = 0.5 * (a + b);
  double gain = gain_over_direct(p, r_star);
  // Golden section never evaluates the bracket ends; check them explicitly.
  for (double end : {a, b}) {
    const double value = gain_over_direct(p, end);
    if (value > gain) {
      gain = value;
      r_star = end;
    }
  }

  GaussChannelResult result;
  result.r_star = r_star;
  result.cap_hit = r_cap - r_star < 1e-6;
  result.f_gauss = p + gain;
  return result;
}

ChannelPoint channel_point(double p, double lambda_max) {
  const GaussChannelResult gauss = gauss_channel_fidelity(p);
  ChannelPoint point;
  point.p = p;
  point.f_av = p;
  point.f_gauss = gauss.f_gauss;
  point.r_star = gauss.r_star;
  point.cap_flag = gauss.cap_hit;
  point.f_opt = lambda_max;
  point.delta_f = lambda_max - gauss.f_gauss;
  point.artifact_flag = point.delta_f < 0.0;
  return point;
}

std::vector<ChannelPoint> channel_from_tradeoff(std::span<const TradeoffPoint> points) {
  std::vector<ChannelPoint> out;
  out.reserve(points.size());
  for (const auto& t : points) {
    if (t.ok) {
      out.push_back(channel_point(t.p, t.lambda_max));
    } else {
      ChannelPoint failed = channel_point(t.p, std::numeric_limits<double>::quiet_NaN());
      failed.artifact_flag = false;
      failed.ok = false;
      failed.error = t.error;
      out.push_back(std::move(failed));
    }
  }
  return out;
}

std::vector<ChannelPoint> channel_scan(std::span<const double> p_grid, std::size_t dim,
                                       const TradeoffOptions& options) {
  const auto points = scan_p(p_grid, dim, options);
  return channel_from_tradeoff(points);
}

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::Direct:
      return "direct";
    case Strategy::GaussianMdm:
      return "gaussian_mdm";
    case Strategy::NonGaussianMdm:
      break;
  }
  return "nongaussian_mdm";
}

Strategy best_strategy(double p, double f_gauss, double f_opt) {
  Strategy best = Strategy::Direct;
  double best_value = p;
  if (f_gauss > best_value) {
    best = Strategy::GaussianMdm;
    best_value = f_gauss;
  }
  if (f_opt > best_value) best = Strategy::NonGaussianMdm;
  return best;
}

Strategy best_strategy(double p, std::size_t dim, std::size_t l_max, const EigOptions& eig) {
  const BlockSet blocks(dim, l_max, false);
  const double f_opt = block_scan(p, blocks, eig).lambda_max;
  return best_strategy(p, gauss_channel_fidelity(p).f_gauss, f_opt);
}

}  // namespace mdm
