#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hjcvx/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Carleman convexification solver for Hamilton-Jacobi equations"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  std::uint64_t seed = 20240601;
  bool verbose = false;
  std::vector<int> tests{1, 2, 3, 4, 5, 6};
  bool sequential = false;

  auto* solve = app.add_subcommand("solve", "Solve one problem described by a JSON configuration");
  solve->add_option("--config", config, "Configuration file")->required();
  solve->add_option("--out", out_dir, "Output directory")->required();
  solve->add_flag("--verbose", verbose, "Write per-iteration log to iterations.csv");

  auto* bench = app.add_subcommand("bench", "Run the built-in benchmark suite");
  bench->add_option("--out", out_dir, "Output directory")->required();
  bench->add_option("--tests", tests, "Benchmark ids to run")->delimiter(',');
  bench->add_flag("--sequential", sequential, "Run benchmarks one after another");

  auto* diag = app.add_subcommand("diag", "Gradient, convexity and Carleman-estimate diagnostics");
  diag->add_option("--config", config, "Configuration file")->required();
  diag->add_option("--seed", seed, "Seed of the random probes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : hjcvx::cli::kConfigError;
  }

  if (*solve) return hjcvx::cli::cmd_solve(config, out_dir, verbose, std::cout, std::cerr);
  if (*bench) return hjcvx::cli::cmd_bench(out_dir, tests, !sequential, std::cout, std::cerr);
  return hjcvx::cli::cmd_diag(config, seed, std::cout, std::cerr);
}
