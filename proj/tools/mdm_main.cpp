// mdm: optimal output/estimation fidelity trade-off for coherent states.
//
//   mdm tradeoff  --dim 500 --lmax 30 --p-grid 0:0.999:101 --out results/
//   mdm baselines --r-grid 0:2:201 --x-grid 0:0.95:96
//   mdm state     --target-f 0.963
//   mdm channel   --p-grid 0:1:101
//   mdm verify
//   mdm dump-block --dim 10 --p-value 0.5 --block -1

#include <cmath>
#include <iostream>
#include <limits>
#include <string>

#include "CLI11.hpp"
#include "mdm/cli.hpp"

namespace {

struct GridText {
  std::string p = "0:0.999:101";
  std::string x = "0:0.95:96";
  std::string r = "0:2:201";
};

void add_common(CLI::App& cmd, mdm::cli::RunConfig& config, GridText& grids) {
  cmd.add_option("--dim", config.dim, "Truncation dimension N")->capture_default_str();
  cmd.add_option("--lmax", config.l_max, "Largest |L| block scanned")->capture_default_str();
  cmd.add_option("--tol", config.tol, "Power-iteration tolerance")->capture_default_str();
  cmd.add_option("--max-iter", config.max_iter, "Power-iteration budget")->capture_default_str();
  cmd.add_option("--retry-factor", config.retry_factor,
                 "Budget multiplier for one retry of a non-converged point (1 = no retry)")
      ->capture_default_str();
  cmd.add_option("--p-grid", grids.p, "Weight grid START:STOP:COUNT")->capture_default_str();
  cmd.add_option("--x-grid", grids.x, "Photon-subtraction grid START:STOP:COUNT")
      ->capture_default_str();
  cmd.add_option("--r-grid", grids.r, "Squeezing grid START:STOP:COUNT")->capture_default_str();
  cmd.add_option("--out", config.out, "Output directory")->capture_default_str();
  cmd.add_option("--seed", config.seed, "Seed for randomized checks")->capture_default_str();
  cmd.add_flag("--verify-blocks", config.verify_blocks, "Also scan the +L blocks");
  cmd.add_option("--mc-samples", config.mc_samples, "Monte Carlo samples for verify")
      ->capture_default_str();
  cmd.add_option("--threads", config.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = mdm::cli;
  CLI::App app{"Optimal output/estimation fidelity trade-off for coherent states"};
  app.require_subcommand(1);

  cli::RunConfig config;
  GridText grids;
  double target_f = std::numeric_limits<double>::quiet_NaN();

  auto* tradeoff = app.add_subcommand("tradeoff", "Optimal trade-off curve -> tradeoff.csv");
  auto* baselines = app.add_subcommand("baselines", "Gaussian and photon-subtracted curves");
  auto* state = app.add_subcommand("state", "Optimal state at a target output fidelity");
  auto* channel = app.add_subcommand("channel", "Lossy-channel transmission fidelity");
  auto* verify = app.add_subcommand("verify", "Cross-checks; nonzero exit on any failure");
  auto* dump = app.add_subcommand("dump-block", "Write one R(p) block as CSV");
  for (auto* cmd : {tradeoff, baselines, state, channel, verify, dump}) {
    add_common(*cmd, config, grids);
  }
  state->add_option("--target-f", target_f, "Target output fidelity F")->required();
  verify->add_flag("--corrupt-matrix", config.corrupt_matrix,
                   "Debug: perturb a matrix entry so the cross-check fails");
  dump->add_option("--p-value", config.block_p, "Weight p")->capture_default_str();
  dump->add_option("--block", config.block_l, "Block label L")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kUsage;
  }

  try {
    config.p_grid = cli::parse_grid(grids.p, 0.0, 1.0);
    config.x_grid = cli::parse_grid(grids.x, 0.0, std::nextafter(1.0, 0.0));
    config.r_grid = cli::parse_grid(grids.r, 0.0, std::numeric_limits<double>::infinity());
    if (!std::isnan(target_f)) config.target_f = target_f;
    cli::validate(config);
  } catch (const cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return cli::kUsage;
  }

  if (*tradeoff) return cli::cmd_tradeoff(config, std::cerr);
  if (*baselines) return cli::cmd_baselines(config, std::cerr);
  if (*state) return cli::cmd_state(config, std::cerr);
  if (*channel) return cli::cmd_channel(config, std::cerr);
  if (*verify) return cli::cmd_verify(config, std::cerr);
  if (*dump) return cli::cmd_dump_block(config, std::cerr);
  return cli::kUsage;
}
