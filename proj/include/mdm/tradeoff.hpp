#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mdm/eigensolver.hpp"
#include "mdm/schmidt.hpp"

namespace mdm {

struct FidelityPair {
  double F = 0.0;  // output (teleportation) fidelity
  double G = 0.0;  // estimation fidelity
};

// Braunstein-Kimble teleportation with a TMSV of squeezing r:
// F = 1 / (1 + e^-2r), G = 1 / (1 + cosh^2 r).
FidelityPair bk_fidelities(double r);

// Optimal Gaussian trade-off G(F) = 1 / (1 + 1 / (4 F (1 - F))), F in [0.5, 1).
double gaussian_tradeoff_g(double F);

// Closed-form fidelities of the photon-subtracted TMSV with x = T lambda in [0, 1).
FidelityPair photon_subtracted_fidelities(double x);

// One point of the optimal (non-Gaussian) trade-off curve. F and G are the
// Rayleigh quotients of the L = 0 Perron vector against R_F and R_G.
struct TradeoffPoint {
  double p = 0.0;
  double lambda_max = 0.0;
  double F = 0.0;
  double G = 0.0;
  int L_star = 0;
  std::size_t dim = 0;
  std::size_t iterations = 0;
  double degeneracy_ratio = 0.0;
  std::optional<SchmidtState> optimal_state;  // Perron vector when L_star == 0
  bool retried = false;  // needed the enlarged iteration budget
  bool ok = true;
  std::string error;  // set when !ok
};

struct TradeoffOptions {
  std::size_t l_max = 30;
  ScanOptions scan;
  // Worker threads for grid evaluation; 0 means hardware concurrency.
  unsigned threads = 0;
  // A point whose block scan runs out of iterations is rescanned once with
  // max_iter * retry_factor. Blocks with L != 0 can sit at an avoided
  // crossing where power iteration converges very slowly. 1 disables.
  std::size_t retry_factor = 10;
};

// Uniform grid of `count` points on [start, stop]; count == 1 gives {start}.
std::vector<double> linear_grid(double start, double stop, std::size_t count);

// Evaluates the optimal trade-off at each p. Output is sorted by p. Solver
// failures are recorded per point (ok = false) and do not abort the scan.
std::vector<TradeoffPoint> scan_p(std::span<const double> p_grid, std::size_t dim,
                                  const TradeoffOptions& options = {});

// Same, reusing prebuilt blocks.
std::vector<TradeoffPoint> scan_p(std::span<const double> p_grid, const BlockSet& blocks,
                                  const TradeoffOptions& options = {});

TradeoffPoint tradeoff_point(double p, const BlockSet& blocks, const EigOptions& eig = {});

// tradeoff_point with the retry policy of `options`.
TradeoffPoint tradeoff_point(double p, const BlockSet& blocks, const TradeoffOptions& options);

struct DeltaG {
  double F = 0.0;
  double delta_g = 0.0;  // G - gaussian_tradeoff_g(F); NaN for failed points
};

std::vector<DeltaG> delta_g_curve(std::span<const TradeoffPoint> points);

// Finds the weight p whose optimal-curve output fidelity is within 1e-4 of
// f_target, by bisection on the (nondecreasing) F(p) of the L = 0 block. The
// returned point comes from a full block scan at that p. Throws RangeError
// (carrying the maximum achievable F) when f_target exceeds F at p = 1.
TradeoffPoint find_p_for_f(double f_target, std::size_t dim, const TradeoffOptions& options = {});

// Output fidelity reachable at this truncation (the p = 1 end of the curve).
double max_output_fidelity(std::size_t dim, const EigOptions& eig = {});

struct SchmidtDelta {
  std::size_t n = 0;
  double c = 0.0;        // coefficient of the given state
  double c_tmsv = 0.0;   // coefficient of the TMSV with the same BK output fidelity
  double delta = 0.0;    // c - c_tmsv
};

// Compares `state` against the TMSV whose BK output fidelity equals f_match
// (lambda = 2 f_match - 1), truncated to the same dimension.
std::vector<SchmidtDelta> schmidt_delta(const SchmidtState& state, double f_match);

}  // namespace mdm
