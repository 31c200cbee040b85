#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace hjcvx::cli {

/// Exit codes shared by the subcommands.
enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kConfigError = 2,
  kRuntimeError = 3,
};

/// Writes solution.csv (u on G), vmin.csv (minimizer on the whole grid),
/// error.csv (when the exact solution is known), trace.csv and summary.json
/// into `out_dir`. Files depend only on the configuration; the wall time goes
/// to `out`.
int cmd_solve(const std::filesystem::path& config_path, const std::filesystem::path& out_dir, bool verbose,
              std::ostream& out, std::ostream& err);

/// Runs the benchmark suite and writes bench.csv and bench.json into `out_dir`.
/// Exits 0 iff every benchmark is within the acceptance factor.
int cmd_bench(const std::filesystem::path& out_dir, const std::vector<int>& test_ids, bool parallel,
              std::ostream& out, std::ostream& err);

/// Gradient, convexity and Carleman-estimate checks; prints a JSON report.
int cmd_diag(const std::filesystem::path& config_path, std::uint64_t seed, std::ostream& out, std::ostream& err);

}  // namespace hjcvx::cli
