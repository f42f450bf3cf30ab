#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mdm/tradeoff.hpp"

namespace mdm {

// Lossy channel that transmits a coherent state perfectly with probability p
// and absorbs it otherwise. Sending the state directly gives average fidelity
// p. Teleporting through the channel with a shared resource state gives the
// weighted fidelity p F + (1 - p) G instead.

struct GaussChannelResult {
  double f_gauss = 0.5;
  double r_star = 0.0;
  bool cap_hit = false;  // maximum sits at r_cap (supremum only reached as r -> inf)
};

inline constexpr double kDefaultSqueezingCap = 25.0;

// max over r in [0, r_cap] of p / (1 + e^-2r) + (1 - p) / (1 + cosh^2 r).
// Coarse bracketing on a 0.01 grid, then golden-section search to |dr| < 1e-8.
GaussChannelResult gauss_channel_fidelity(double p, double r_cap = kDefaultSqueezingCap);

struct ChannelPoint {
  double p = 0.0;
  double f_av = 0.0;
  double f_gauss = 0.0;
  double r_star = 0.0;
  bool cap_flag = false;
  double f_opt = 0.0;    // lambda_max(p)
  double delta_f = 0.0;  // f_opt - f_gauss
  // delta_f < 0: the truncated non-Gaussian optimum fell below the Gaussian
  // one, which can only be a truncation effect.
  bool artifact_flag = false;
  bool ok = true;
  std::string error;
};

ChannelPoint channel_point(double p, double lambda_max);

std::vector<ChannelPoint> channel_from_tradeoff(std::span<const TradeoffPoint> points);

std::vector<ChannelPoint> channel_scan(std::span<const double> p_grid, std::size_t dim,
                                       const TradeoffOptions& options = {});

enum class Strategy { Direct, GaussianMdm, NonGaussianMdm };

std::string_view to_string(Strategy strategy);

// Best of {p, f_gauss, f_opt}; ties go to the simpler strategy.
Strategy best_strategy(double p, double f_gauss, double f_opt);
Strategy best_strategy(double p, std::size_t dim, std::size_t l_max, const EigOptions& eig = {});

}  // namespace mdm
