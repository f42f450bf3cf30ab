#include "mdm/gaussianity.hpp"

#include <cmath>
#include <ostream>

#include "mdm/csv.hpp"

namespace mdm {

VarianceParams variance_params(const SchmidtState& state) {
  const auto c = state.coeffs();
  VarianceParams params;
  double mean_n = 0.0;
  double cross = 0.0;
  for (std::size_t n = 0; n < c.size(); ++n) {
    mean_n += static_cast<double>(n) * c[n] * c[n];
    if (n + 1 < c.size()) cross += static_cast<double>(n + 1) * c[n] * c[n + 1];
  }
  params.a = mean_n + 0.5;
  params.c = cross;
  return params;
}

std::string_view to_string(GaussianityVerdict verdict) {
  switch (verdict) {
    case GaussianityVerdict::ConsistentWithGaussian:
      return "consistent_with_gaussian";
    case GaussianityVerdict::NonGaussian:
      return "non_gaussian";
    case GaussianityVerdict::Inconclusive:
      break;
  }
  return "inconclusive";
}

GaussianityReport gaussianity_witness(const SchmidtState& state, std::optional<double> leakage) {
  const VarianceParams params = variance_params(state);
  GaussianityReport report;
  report.a = params.a;
  report.c = params.c;
  // (a - c)(a + c) keeps precision when a and c are both large.
  report.witness = (params.a - params.c) * (params.a + params.c) - 0.25;
  report.lambda_nearest = std::sqrt((params.a - 0.5) / (params.a + 0.5));
  if (leakage) {
    report.leakage = *leakage;
  } else {
    const double edge = state[state.dim() - 1];
    report.leakage = state.dim() > 1 ? edge * edge : 0.0;
  }

  if (!(report.leakage < kMaxLeakageForVerdict)) {
    report.verdict = GaussianityVerdict::Inconclusive;
  } else if (report.witness > kNonGaussianThreshold) {
    report.verdict = GaussianityVerdict::NonGaussian;
  } else {
    report.verdict = GaussianityVerdict::ConsistentWithGaussian;
  }
  return report;
}

void write_report(std::ostream& out, const GaussianityReport& report) {
  out << "a: " << format_double(report.a) << '\n'
      << "c: " << format_double(report.c) << '\n'
      << "witness: " << format_double(report.witness) << '\n'
      << "lambda_nearest: " << format_double(report.lambda_nearest) << '\n'
      << "leakage: " << format_double(report.leakage) << '\n'
      << "verdict: " << to_string(report.verdict) << '\n';
}

void write_report_csv(std::ostream& out, const GaussianityReport& report) {
  CsvWriter csv(out);
  csv.header({"a", "c", "witness", "lambda_nearest", "leakage", "verdict"});
  csv.field(report.a)
      .field(report.c)
      .field(report.witness)
      .field(report.lambda_nearest)
      .field(report.leakage)
      .field(to_string(report.verdict));
  csv.end_row();
}

}  // namespace mdm
