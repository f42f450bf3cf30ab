#pragma once

#include <iosfwd>
#include <optional>
#include <string_view>

#include "mdm/schmidt.hpp"

namespace mdm {

// The two independent entries of the variance matrix of sum_n c_n |n, n>
// (vacuum variance 1/2):
//   a = sum_n n c_n^2 + 1/2,  c = sum_n (n + 1) c_n c_{n+1}.
struct VarianceParams {
  double a = 0.5;
  double c = 0.0;
};

VarianceParams variance_params(const SchmidtState& state);

enum class GaussianityVerdict { ConsistentWithGaussian, NonGaussian, Inconclusive };

std::string_view to_string(GaussianityVerdict verdict);

// A pure Gaussian state with this covariance pattern must satisfy
// a^2 - c^2 = 1/4, and is then the TMSV with lambda = sqrt((a - 1/2)/(a + 1/2)).
// witness = a^2 - c^2 - 1/4 is zero for such states and positive otherwise.
// The verdict only applies within the photon-number-correlated family.
struct GaussianityReport {
  double a = 0.5;
  double c = 0.0;
  double witness = 0.0;
  double lambda_nearest = 0.0;
  double leakage = 0.0;
  GaussianityVerdict verdict = GaussianityVerdict::Inconclusive;
};

inline constexpr double kNonGaussianThreshold = 1e-6;
inline constexpr double kMaxLeakageForVerdict = 1e-10;

// `leakage` is the truncation leakage of the state, when known. Without it
// the weight at the truncation edge, c_{N-1}^2, is used as a proxy.
GaussianityReport gaussianity_witness(const SchmidtState& state,
                                      std::optional<double> leakage = std::nullopt);

// "key: value" lines.
void write_report(std::ostream& out, const GaussianityReport& report);
// Header row and one data row.
void write_report_csv(std::ostream& out, const GaussianityReport& report);

}  // namespace mdm
