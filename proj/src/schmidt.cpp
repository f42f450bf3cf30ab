#include "mdm/schmidt.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string_view>

#include "mdm/csv.hpp"
#include "mdm/errors.hpp"

namespace mdm {

namespace {

constexpr double kNormTolerance = 1e-12;
constexpr double kNegativeClamp = 1e-12;
constexpr double kFileNormTolerance = 1e-6;

double squared_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

void check_unit_interval(double value, const char* name) {
  if (!(value >= 0.0 && value < 1.0)) {
    throw DomainError(std::string(name) + " must lie in [0, 1), got " + format_double(value));
  }
}

}  // namespace

SchmidtState SchmidtState::from_coefficients(std::vector<double> coeffs) {
  if (coeffs.empty()) throw DomainError("Schmidt state needs at least one coefficient");
  for (double c : coeffs) {
    if (!std::isfinite(c) || c < 0.0) {
      throw DomainError("Schmidt coefficients must be finite and nonnegative, got " +
                        format_double(c));
    }
  }
  const double norm2 = squared_norm(coeffs);
  if (std::abs(norm2 - 1.0) > kNormTolerance) {
    throw DomainError("Schmidt coefficients must have unit norm, sum c_n^2 = " +
                      format_double(norm2));
  }
  return SchmidtState(std::move(coeffs));
}

SchmidtState SchmidtState::normalized(std::vector<double> coeffs) {
  if (coeffs.empty()) throw DomainError("Schmidt state needs at least one coefficient");
  for (double& c : coeffs) {
    if (!std::isfinite(c) || c < -kNegativeClamp) {
      throw DomainError("cannot normalize coefficient " + format_double(c));
    }
    if (c < 0.0) c = 0.0;
  }
  const double norm = std::sqrt(squared_norm(coeffs));
  if (norm == 0.0) throw DomainError("cannot normalize the zero vector");
  for (double& c : coeffs) c /= norm;
  return SchmidtState(std::move(coeffs));
}

SchmidtState SchmidtState::vacuum(std::size_t dim) {
  std::vector<double> coeffs(dim == 0 ? 1 : dim, 0.0);
  coeffs[0] = 1.0;
  return SchmidtState(std::move(coeffs));
}

SchmidtState SchmidtState::padded(std::size_t new_dim) const {
  std::vector<double> coeffs = coeffs_;
  if (new_dim > coeffs.size()) coeffs.resize(new_dim, 0.0);
  return SchmidtState(std::move(coeffs));
}

TruncatedState tmsv(double lambda, std::size_t dim) {
  check_unit_interval(lambda, "squeezing lambda");
  if (dim == 0) throw DomainError("truncation dimension must be at least 1");
  std::vector<double> coeffs(dim);
  const double prefactor = std::sqrt(1.0 - lambda * lambda);
  double power = 1.0;
  for (std::size_t n = 0; n < dim; ++n) {
    coeffs[n] = prefactor * power;
    power *= lambda;
  }
  // Closed form of 1 - sum_{n<N} (1 - lambda^2) lambda^(2n).
  const double leakage = std::pow(lambda, 2.0 * static_cast<double>(dim));
  return {SchmidtState::normalized(std::move(coeffs)), leakage};
}

TruncatedState photon_subtracted(double x, std::size_t dim) {
  check_unit_interval(x, "photon-subtraction parameter x");
  if (dim == 0) throw DomainError("truncation dimension must be at least 1");
  const double x2 = x * x;
  const double prefactor = std::sqrt((1.0 - x2) * (1.0 - x2) * (1.0 - x2) / (1.0 + x2));
  std::vector<double> coeffs(dim);
  double power = 1.0;
  for (std::size_t n = 0; n < dim; ++n) {
    coeffs[n] = prefactor * static_cast<double>(n + 1) * power;
    power *= x;
  }
  // Tail mass summed directly to avoid cancellation in 1 - sum.
  double leakage = 0.0;
  if (x > 0.0) {
    for (std::size_t n = dim;; ++n) {
      const double c = prefactor * static_cast<double>(n + 1) *
                       std::pow(x, static_cast<double>(n));
      const double term = c * c;
      leakage += term;
      if (term <= 1e-18 * leakage || term == 0.0 || n > dim + 1000000) break;
    }
  }
  return {SchmidtState::normalized(std::move(coeffs)), leakage};
}

double fidelity_output(const SchmidtState& state) {
  const std::size_t dim = state.dim();
  return fidelity_output(state, LogFactorialTable(2 * dim + 1));
}

double fidelity_output(const SchmidtState& state, const LogFactorialTable& table) {
  const std::size_t dim = state.dim();
  const auto c = state.coeffs();
  table.require(2 * (dim - 1));
  double total = 0.0;
  for (std::size_t diagonal = 0; diagonal + 1 < 2 * dim; ++diagonal) {
    const std::size_t m_lo = diagonal >= dim ? diagonal - dim + 1 : 0;
    const std::size_t m_mid = diagonal / 2;
    const double log_head = table.log_factorial(diagonal) -
                            static_cast<double>(diagonal + 1) * std::numbers::ln2;
    // Terms (m, n) and (n, m) are equal; sum m <= n once and double the off-diagonal part.
    double partial = 0.0;
    for (std::size_t m = m_lo; m <= m_mid; ++m) {
      const std::size_t n = diagonal - m;
      const double weight = c[m] * c[n];
      if (weight == 0.0) continue;
      const double term =
          weight * std::exp(log_head - table.log_factorial(m) - table.log_factorial(n));
      partial += m == n ? term : 2.0 * term;
    }
    total += partial;
  }
  return total;
}

double fidelity_estimation(const SchmidtState& state) {
  double total = 0.0;
  const auto c = state.coeffs();
  for (std::size_t n = 0; n < c.size(); ++n) {
    total += std::ldexp(c[n] * c[n], -static_cast<int>(n + 1));
  }
  return total;
}

void write_state(std::ostream& out, const SchmidtState& state, const StateHeader& header) {
  out << "# schmidt-state\n";
  out << "# dim: " << state.dim() << '\n';
  for (const auto& [key, value] : header) out << "# " << key << ": " << value << '\n';
  for (std::size_t n = 0; n < state.dim(); ++n) {
    out << n << ' ' << format_double(state[n]) << '\n';
  }
}

SchmidtState read_state(std::istream& in) {
  std::vector<double> coeffs;
  std::string line;
  std::size_t line_no = 0;
  std::size_t last_data_line = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream fields(line);
    std::string index_text, value_text, extra;
    if (!(fields >> index_text >> value_text) || (fields >> extra)) {
      throw ParseError("expected \"n c_n\", got \"" + line + "\"", line_no);
    }
    std::size_t index = 0;
    double value = 0.0;
    const auto idx = std::from_chars(index_text.data(), index_text.data() + index_text.size(), index);
    if (idx.ec != std::errc() || idx.ptr != index_text.data() + index_text.size()) {
      throw ParseError("malformed index \"" + index_text + "\"", line_no);
    }
    const auto val = std::from_chars(value_text.data(), value_text.data() + value_text.size(), value);
    if (val.ec != std::errc() || val.ptr != value_text.data() + value_text.size() ||
        !std::isfinite(value)) {
      throw ParseError("malformed coefficient \"" + value_text + "\"", line_no);
    }
    if (index != coeffs.size()) {
      throw ParseError("indices must be contiguous from 0; expected " +
                           std::to_string(coeffs.size()) + ", got " + std::to_string(index),
                       line_no);
    }
    if (value < 0.0) {
      throw ParseError("negative coefficient " + value_text, line_no);
    }
    coeffs.push_back(value);
    last_data_line = line_no;
  }
  if (coeffs.empty()) throw ParseError("no coefficients found", line_no);

  const double norm2 = squared_norm(coeffs);
  if (std::abs(norm2 - 1.0) > kFileNormTolerance) {
    throw ParseError("coefficients have sum c_n^2 = " + format_double(norm2) +
                         ", more than 1e-6 away from 1",
                     last_data_line);
  }
  if (std::abs(norm2 - 1.0) > kNormTolerance) return SchmidtState::normalized(std::move(coeffs));
  return SchmidtState::from_coefficients(std::move(coeffs));
}

void save_state(const SchmidtState& state, const std::filesystem::path& path,
                const StateHeader& header) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_state(out, state, header);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

SchmidtState load_state(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_state(in);
}

}  // namespace mdm
