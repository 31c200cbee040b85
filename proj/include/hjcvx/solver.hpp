#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hjcvx/carleman.hpp"
#include "hjcvx/functional.hpp"
#include "hjcvx/grid.hpp"
#include "hjcvx/optimizer.hpp"
#include "hjcvx/problem.hpp"

namespace hjcvx {

/// A problem given by expression strings (see Expression for the syntax).
struct CustomProblemSpec {
  int dim = 1;
  double lambda_eq = 1.0;
  std::string hamiltonian;
  std::string rhs;
  double growth_k = 1.0;
  std::optional<std::string> exact;

  bool operator==(const CustomProblemSpec&) const = default;
};

struct ProblemSelection {
  /// Either a built-in benchmark id (1..6) or a custom problem.
  std::optional<int> builtin = 1;
  RhsVariant rhs_variant = RhsVariant::consistent;
  std::optional<CustomProblemSpec> custom;

  int dim() const;
  bool operator==(const ProblemSelection&) const = default;
};

HamiltonianProblem make_problem(const ProblemSelection& sel);

struct SolveConfig {
  int dim = 1;
  int n = 70;
  double half_width = 2.0;
  double subdomain_half_width = 0.8;
  CarlemanParams carleman;
  FunctionalConfig functional;
  OptimizerConfig optimizer;
  ProblemSelection problem;

  bool operator==(const SolveConfig&) const = default;
};

/// Parameters of the published experiments for benchmark `test_id`: n = 70,
/// R = 2, G = (-0.8, 0.8)^d, x0 = 9 (1D) or (9, 0) (2D), beta = 20,
/// lambda_c = 3, eps0 = eta = 1e-3, v0 = 0.
SolveConfig reference_config(int test_id);

/// Checks cross-field consistency (dimensions, x0 outside the box, G inside).
void validate(const SolveConfig& cfg);

struct SolveResult {
  ScalarField v_min;
  SubdomainField u_on_G;
  OptimizeTrace trace;
  ObjectiveReport final_objective;
  CutoffSpec cutoff;
  std::optional<SubdomainField> u_true_on_G;
  /// |u_comp - u_true| / max|u_true| per subdomain node.
  std::optional<SubdomainField> error_field;
  std::optional<double> max_relative_error;
  double wall_time_s = 0.0;
};

/// An error raised inside one stage of the pipeline; `step` is 1..5.
class SolveError : public std::runtime_error {
 public:
  SolveError(int step, const std::string& what);
  int step() const { return step_; }

 private:
  int step_;
};

/// Grid and cutoff (1), Carleman weights (2), functional (3), minimization
/// from v0 = 0 (4), recovery u = v_min / chi on G with error metrics (5).
SolveResult solve(const SolveConfig& cfg, std::ostream* log = nullptr);

/// Maximum relative errors reported for benchmarks 1-6.
inline constexpr std::array<double, kBuiltinCount> kReferenceErrors = {0.0294, 0.0457, 0.0203,
                                                                  0.0168, 0.0016, 0.0099};
/// A benchmark reproduces when observed/reference lies in [1/3, 3].
inline constexpr double kAcceptanceFactor = 3.0;

struct BenchmarkRow {
  int test_id = 0;
  double max_relative_error = 0.0;
  double reference_error = 0.0;
  int iterations = 0;
  double wall_time_s = 0.0;
  std::string termination;
  /// Empty on success; otherwise the error that stopped this benchmark.
  std::string failure;

  double ratio() const { return max_relative_error / reference_error; }
  bool within_factor() const;
};

struct BenchmarkOptions {
  std::vector<int> test_ids{1, 2, 3, 4, 5, 6};
  /// Replaces the optimizer settings of every benchmark when set.
  std::optional<OptimizerConfig> optimizer;
  /// Runs the benchmarks on separate threads.
  bool parallel = true;
};

/// Default optimizer budget used for the published benchmarks.
OptimizerConfig benchmark_optimizer(int test_id);

std::vector<BenchmarkRow> run_benchmark_suite(const BenchmarkOptions& opts = {});

}  // namespace hjcvx
