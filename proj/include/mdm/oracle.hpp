#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mdm/schmidt.hpp"

namespace mdm {

// Independent route to the fidelities of sum_n c_n |n, n>. With the
// teleporter's transfer operators T(beta) = D(beta) T(0) D(beta)^dagger,
// T(0) = sum c_n |n><n|, the phase integral over beta is trivial and only
// t = |beta|^2 remains:
//   F = int_0^inf e^-2t g(t)^2 dt,  g(t) = sum_n c_n t^n / n!
//   G = int_0^inf e^-2t h(t) dt,    h(t) = sum_n c_n^2 t^n / n!
// Neither integral uses the binomial series, so agreement with
// fidelity_output / fidelity_estimation checks those series.

// Gauss rule for int_0^inf e^-2t f(t) dt, exact for polynomials of degree
// < 2 * order. Built from standard Gauss-Laguerre nodes x_i (weight e^-x)
// as t_i = x_i / 2, w_i -> w_i / 2.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> log_weights;  // weights underflow to 0 beyond t ~ 370

  std::size_t order() const { return nodes.size(); }
};

QuadratureRule laguerre_rule(std::size_t order);

struct OracleFidelities {
  double F = 0.0;
  double G = 0.0;
  // order < dim: g^2 has degree 2(dim - 1) and is no longer integrated exactly.
  bool precision_warning = false;
};

OracleFidelities oracle_fidelities(const SchmidtState& state, std::size_t order);
OracleFidelities oracle_fidelities(const SchmidtState& state, const QuadratureRule& rule);

struct McFidelities {
  double F = 0.0;
  double F_stderr = 0.0;
  double G = 0.0;
  double G_stderr = 0.0;
};

// Monte Carlo estimate of the same integrals. t is drawn from an equal-weight
// mixture of Gamma(k + 1, rate 2) densities, k = 0 .. 2(dim - 1); k = 0 is the
// plain exponential 2 e^-2t. The mixture keeps the importance ratio bounded,
// which an exponential proposal alone does not once the state has weight at
// large n. Sample i draws from its own counter-based stream, so results depend
// only on (state, samples, seed). samples >= 10^4.
McFidelities mc_fidelities(const SchmidtState& state, std::size_t samples, std::uint64_t seed);

// Counter-based generator: the j-th draw of stream i depends only on (seed, i, j).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  // Uniform on (0, 1).
  double uniform();

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

}  // namespace mdm
