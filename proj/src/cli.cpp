#include "mdm/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <Eigen/Dense>

#include "mdm/channel.hpp"
#include "mdm/csv.hpp"
#include "mdm/eigensolver.hpp"
#include "mdm/errors.hpp"
#include "mdm/gaussianity.hpp"
#include "mdm/oracle.hpp"
#include "mdm/schmidt.hpp"
#include "mdm/tradeoff.hpp"

namespace mdm::cli {

namespace {

double parse_number(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    throw UsageError("malformed " + std::string(what) + " \"" + std::string(text) + "\"");
  }
  return value;
}

std::ofstream open_output(const RunConfig& config, const std::string& name) {
  std::filesystem::create_directories(config.out);
  const auto path = config.out / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

TradeoffOptions tradeoff_options(const RunConfig& config) {
  TradeoffOptions options;
  options.l_max = config.l_max;
  options.scan.eig.tol = config.tol;
  options.scan.eig.max_iter = config.max_iter;
  options.scan.verify_blocks = config.verify_blocks;
  options.threads = config.threads;
  options.retry_factor = config.retry_factor;
  return options;
}

int exit_for_failures(std::size_t failed, std::size_t total) {
  if (total > 0 && failed == total) return kNumericalFailure;
  if (failed > 0) return kPartialResults;
  return kSuccess;
}

template <typename Body>
int guarded(std::ostream& log, Body&& body) {
  try {
    return body();
  } catch (const UsageError& e) {
    log << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    log << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const RangeError& e) {
    log << "range error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConfigError& e) {
    log << "configuration error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConvergenceError& e) {
    log << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

CheckResult check(std::string name, bool passed, std::string detail) {
  return {std::move(name), passed, std::move(detail)};
}

}  // namespace

std::vector<double> GridSpec::values() const {
  return linear_grid(start, stop, count);
}

GridSpec parse_grid(std::string_view text, double lo, double hi) {
  const auto first = text.find(':');
  const auto second = first == std::string_view::npos ? first : text.find(':', first + 1);
  if (first == std::string_view::npos || second == std::string_view::npos ||
      text.find(':', second + 1) != std::string_view::npos) {
    throw UsageError("grid must look like START:STOP:COUNT, got \"" + std::string(text) + "\"");
  }
  GridSpec grid;
  grid.start = parse_number(text.substr(0, first), "grid start");
  grid.stop = parse_number(text.substr(first + 1, second - first - 1), "grid stop");
  const auto count_text = text.substr(second + 1);
  const auto result =
      std::from_chars(count_text.data(), count_text.data() + count_text.size(), grid.count);
  if (result.ec != std::errc() || result.ptr != count_text.data() + count_text.size()) {
    throw UsageError("malformed grid count \"" + std::string(count_text) + "\"");
  }
  if (grid.stop < grid.start) throw UsageError("grid stop must not be below start");
  if (grid.start < lo || grid.stop > hi) {
    throw UsageError("grid " + std::string(text) + " leaves [" + format_double(lo) + ", " +
                     format_double(hi) + "]");
  }
  return grid;
}

void validate(const RunConfig& config) {
  if (config.dim < 1) throw UsageError("--dim must be at least 1");
  if (!(config.tol > 0.0)) throw UsageError("--tol must be positive");
  if (config.max_iter < 1) throw UsageError("--max-iter must be at least 1");
  if (config.retry_factor < 1) throw UsageError("--retry-factor must be at least 1");
  const auto& g = config.p_grid;
  if (g.count > 0 && (g.start < 0.0 || g.stop > 1.0 || g.stop < g.start)) {
    throw UsageError("--p-grid must lie within [0, 1]");
  }
}

int cmd_tradeoff(const RunConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    validate(config);
    const auto grid = config.p_grid.values();
    const auto points = scan_p(grid, config.dim, tradeoff_options(config));
    const auto delta = delta_g_curve(points);

    auto out = open_output(config, "tradeoff.csv");
    CsvWriter csv(out);
    csv.header({"p", "lambda_max", "F", "G", "L_star", "N", "iterations", "G_bk_at_F", "delta_G",
                "degeneracy_ratio", "status"});
    std::size_t failed = 0;
    double best_dg = -1.0;
    double best_f = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto& pt = points[i];
      const double g_bk = pt.ok ? pt.G - delta[i].delta_g : std::nan("");
      csv.field(pt.p).field(pt.lambda_max).field(pt.F).field(pt.G).field(pt.L_star).field(pt.dim)
          .field(pt.iterations).field(g_bk).field(delta[i].delta_g).field(pt.degeneracy_ratio)
          .field(!pt.ok ? "failed" : pt.retried ? "retried" : "ok");
      csv.end_row();
      if (!pt.ok) {
        ++failed;
        log << "p = " << format_double(pt.p) << " failed: " << pt.error << '\n';
      } else if (delta[i].delta_g > best_dg) {
        best_dg = delta[i].delta_g;
        best_f = pt.F;
      }
    }
    if (failed < points.size() && !points.empty()) {
      log << "max delta_G = " << format_double(best_dg) << " at F = " << format_double(best_f)
          << " (N = " << config.dim << ", L_max = " << config.l_max << ")\n";
    }
    return exit_for_failures(failed, points.size());
  });
}

int cmd_baselines(const RunConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    auto out = open_output(config, "baselines.csv");
    CsvWriter csv(out);
    csv.header({"kind", "parameter", "F", "G"});
    for (double r : config.r_grid.values()) {
      const auto fg = bk_fidelities(r);
      csv.field("bk").field(r).field(fg.F).field(fg.G);
      csv.end_row();
    }
    for (double x : config.x_grid.values()) {
      const auto fg = photon_subtracted_fidelities(x);
      csv.field("subtracted").field(x).field(fg.F).field(fg.G);
      csv.end_row();
    }
    return static_cast<int>(kSuccess);
  });
}

int cmd_state(const RunConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    validate(config);
    if (!config.target_f) throw UsageError("state needs --target-f");
    const double target = *config.target_f;
    if (!(target >= 0.5 && target < 1.0)) throw UsageError("--target-f must lie in [0.5, 1)");

    const TradeoffPoint point = find_p_for_f(target, config.dim, tradeoff_options(config));
    if (!point.optimal_state) {
      log << "optimal eigenvector lies in block L = " << point.L_star
          << ", not a photon-number-correlated state\n";
      return static_cast<int>(kNumericalFailure);
    }
    const SchmidtState& state = *point.optimal_state;

    {
      auto out = open_output(config, "state.txt");
      write_state(out, state,
                  {{"p", format_double(point.p)},
                   {"lambda_max", format_double(point.lambda_max)},
                   {"F", format_double(point.F)},
                   {"G", format_double(point.G)},
                   {"l_max", std::to_string(config.l_max)}});
    }
    const GaussianityReport report = gaussianity_witness(state);
    {
      auto out = open_output(config, "gaussianity.txt");
      write_report(out, report);
    }
    {
      auto out = open_output(config, "gaussianity.csv");
      write_report_csv(out, report);
    }
    {
      auto out = open_output(config, "delta_c.csv");
      CsvWriter csv(out);
      csv.header({"n", "c_n", "c_tmsv", "delta_c"});
      for (const auto& row : schmidt_delta(state, std::clamp(point.F, 0.5, 1.0 - 1e-16))) {
        csv.field(row.n).field(row.c).field(row.c_tmsv).field(row.delta);
        csv.end_row();
      }
    }
    log << "p = " << format_double(point.p) << ", F = " << format_double(point.F)
        << ", G = " << format_double(point.G) << ", witness = " << format_double(report.witness)
        << " (" << to_string(report.verdict) << ")\n";
    return static_cast<int>(kSuccess);
  });
}

int cmd_channel(const RunConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    validate(config);
    const auto grid = config.p_grid.values();
    const auto points = channel_scan(grid, config.dim, tradeoff_options(config));

    auto out = open_output(config, "channel.csv");
    CsvWriter csv(out);
    csv.header({"p", "f_av", "f_gauss", "r_star", "cap_flag", "f_opt", "delta_f", "artifact_flag",
                "status"});
    std::size_t failed = 0;
    double best_df = -1.0;
    double best_p = 0.0;
    for (const auto& pt : points) {
      csv.field(pt.p).field(pt.f_av).field(pt.f_gauss).field(pt.r_star)
          .field(pt.cap_flag ? 1 : 0).field(pt.f_opt).field(pt.delta_f)
          .field(pt.artifact_flag ? 1 : 0).field(pt.ok ? "ok" : "failed");
      csv.end_row();
      if (!pt.ok) {
        ++failed;
        log << "p = " << format_double(pt.p) << " failed: " << pt.error << '\n';
      } else if (pt.delta_f > best_df) {
        best_df = pt.delta_f;
        best_p = pt.p;
      }
    }
    if (failed < points.size() && !points.empty()) {
      log << "max delta_f = " << format_double(best_df) << " at p = " << format_double(best_p)
          << '\n';
    }
    return exit_for_failures(failed, points.size());
  });
}

int cmd_dump_block(const RunConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    validate(config);
    const auto table = LogFactorialTable::for_blocks(config.dim,
                                                     static_cast<std::size_t>(std::abs(config.block_l)));
    const RBlock block = build_r(config.block_p, config.block_l, config.dim, table);
    auto out = open_output(config, "block.csv");
    write_block_csv(out, block);
    return static_cast<int>(kSuccess);
  });
}

std::vector<CheckResult> run_verification(const RunConfig& config) {
  std::vector<CheckResult> results;
  const EigOptions eig{config.tol, config.max_iter};

  {
    // Quadrature oracle against both series on random states.
    double worst = 0.0;
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
      CounterRng rng(config.seed, trial);
      const auto dim = 1 + static_cast<std::size_t>(rng.uniform() * 30.0);
      std::vector<double> c(dim);
      for (double& x : c) x = rng.uniform();
      const SchmidtState state = SchmidtState::normalized(std::move(c));
      const auto q = oracle_fidelities(state, dim + 4);
      worst = std::max({worst, std::abs(q.F - fidelity_output(state)),
                        std::abs(q.G - fidelity_estimation(state))});
    }
    results.push_back(check("oracle_quadrature", worst <= 1e-10,
                            "max |oracle - series| = " + format_double(worst)));
  }

  {
    const SchmidtState state = tmsv(0.5, 30).state;
    const auto mc = mc_fidelities(state, std::max<std::size_t>(config.mc_samples, 10000),
                                  config.seed);
    const double df = std::abs(mc.F - fidelity_output(state));
    const double dg = std::abs(mc.G - fidelity_estimation(state));
    const bool ok = df <= 3.0 * mc.F_stderr + 1e-12 && dg <= 3.0 * mc.G_stderr + 1e-12;
    results.push_back(check("oracle_monte_carlo", ok,
                            "|dF| = " + format_double(df) + " (se " + format_double(mc.F_stderr) +
                                "), |dG| = " + format_double(dg) + " (se " +
                                format_double(mc.G_stderr) + ")"));
  }

  {
    double worst = 0.0;
    for (std::size_t dim = 1; dim <= 4; ++dim) {
      const BlockSet blocks(dim, dim - 1, true);
      for (double p : linear_grid(0.0, 1.0, 11)) {
        double full = 0.0;
        if (config.corrupt_matrix) {
          Eigen::MatrixXd r = full_space_operator(p, dim);
          r(0, 0) += 0.05;
          full = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(r, Eigen::EigenvaluesOnly)
                     .eigenvalues()
                     .maxCoeff();
        } else {
          full = small_n_crosscheck(p, dim);
        }
        worst = std::max(worst, std::abs(full - block_scan(p, blocks, eig).lambda_max));
      }
    }
    results.push_back(check("small_n_crosscheck", worst <= 1e-10,
                            "max |full-space - block scan| = " + format_double(worst)));
  }

  {
    const std::size_t dim = std::min<std::size_t>(config.dim, 50);
    const BlockSet blocks(dim, 3, true);
    bool ok = true;
    double worst = 0.0;
    for (int l = 1; l <= 3; ++l) {
      for (double p : linear_grid(0.0, 1.0, 5)) {
        const RBlock minus = blocks.combined(p, -l);
        const RBlock plus = blocks.combined(p, l);
        if (((minus.entries - plus.entries).array() < 0.0).any()) ok = false;
        const double gap = dominant_eig(minus, eig).eigenvalue - dominant_eig(plus, eig).eigenvalue;
        worst = std::min(worst, gap);
      }
    }
    ok = ok && worst >= -1e-12;
    results.push_back(check("block_domination", ok,
                            "min lambda(-L) - lambda(+L) = " + format_double(worst)));
  }

  {
    const std::size_t dim = std::min<std::size_t>(config.dim, 50);
    TradeoffOptions options;
    options.l_max = std::min<std::size_t>(config.l_max, 3);
    options.scan.eig = eig;
    options.threads = config.threads;
    const auto grid = linear_grid(0.0, 0.99, 12);
    const auto points = scan_p(grid, dim, options);
    double split = 0.0;
    double min_entry = 0.0;
    bool all_ok = true;
    for (const auto& pt : points) {
      all_ok = all_ok && pt.ok;
      if (!pt.ok) continue;
      split = std::max(split, std::abs(pt.p * pt.F + (1.0 - pt.p) * pt.G - pt.lambda_max));
      if (pt.optimal_state) {
        for (double c : pt.optimal_state->coeffs()) min_entry = std::min(min_entry, c);
      }
    }
    results.push_back(check("rayleigh_split", all_ok && split <= 1e-10,
                            "max |pF + (1-p)G - lambda| = " + format_double(split)));
    results.push_back(check("perron_nonnegative", all_ok && min_entry >= -1e-12,
                            "min coefficient = " + format_double(min_entry)));
  }

  {
    double previous = 0.0;
    bool ok = true;
    for (std::size_t dim : {1, 2, 4, 8, 12, 20, 35, 50}) {
      const double lambda = block_scan(0.5, BlockSet(dim, 2, false), eig).lambda_max;
      ok = ok && lambda >= previous - 1e-12;
      previous = lambda;
    }
    results.push_back(check("monotone_in_dim", ok, "lambda_max(0.5) at N = 50: " +
                                                       format_double(previous)));
  }
  return results;
}

int cmd_verify(const RunConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    validate(config);
    const auto results = run_verification(config);
    auto out = open_output(config, "verify.txt");
    bool all = true;
    for (const auto& r : results) {
      std::ostringstream line;
      line << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
      out << line.str();
      log << line.str();
      all = all && r.passed;
    }
    return static_cast<int>(all ? kSuccess : kNumericalFailure);
  });
}

}  // namespace mdm::cli
