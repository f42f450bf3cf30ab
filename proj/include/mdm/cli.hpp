#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mdm::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kNumericalFailure = 2,
  kPartialResults = 3,
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// START:STOP:COUNT, inclusive of both ends.
struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  std::size_t count = 0;

  std::vector<double> values() const;
};

// Throws UsageError on malformed text or when the grid leaves [lo, hi].
GridSpec parse_grid(std::string_view text, double lo, double hi);

struct RunConfig {
  std::size_t dim = 500;
  std::size_t l_max = 30;
  double tol = 1e-12;
  std::size_t max_iter = 100000;
  std::size_t retry_factor = 10;
  GridSpec p_grid{0.0, 0.999, 101};
  GridSpec x_grid{0.0, 0.95, 96};
  GridSpec r_grid{0.0, 2.0, 201};
  std::optional<double> target_f;
  std::filesystem::path out = ".";
  std::uint64_t seed = 20060101;
  bool verify_blocks = false;
  std::size_t mc_samples = 1000000;
  unsigned threads = 0;

  // Used by dump-block.
  double block_p = 0.5;
  int block_l = 0;

  // Debug hook for verify: perturbs one matrix entry so the checks must fail.
  bool corrupt_matrix = false;
};

// Throws UsageError when a field is out of range.
void validate(const RunConfig& config);

// Each command writes its files under config.out (created if missing),
// prints diagnostics to `log`, and returns an ExitCode.
//   tradeoff   -> tradeoff.csv
//   baselines  -> baselines.csv
//   state      -> state.txt, gaussianity.txt, gaussianity.csv, delta_c.csv
//   channel    -> channel.csv
//   verify     -> verify.txt (also echoed to log)
//   dump-block -> block.csv
int cmd_tradeoff(const RunConfig& config, std::ostream& log);
int cmd_baselines(const RunConfig& config, std::ostream& log);
int cmd_state(const RunConfig& config, std::ostream& log);
int cmd_channel(const RunConfig& config, std::ostream& log);
int cmd_verify(const RunConfig& config, std::ostream& log);
int cmd_dump_block(const RunConfig& config, std::ostream& log);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// The checks behind cmd_verify, at sizes independent of config.dim (capped at 50).
std::vector<CheckResult> run_verification(const RunConfig& config);

}  // namespace mdm::cli
