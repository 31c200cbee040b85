#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hjcvx/grid.hpp"

namespace hjcvx {

enum class DescentMethod {
  /// Steepest descent with Armijo backtracking.
  gradient_descent,
  /// Limited-memory BFGS directions with the same Armijo backtracking.
  lbfgs,
};

std::string to_string(DescentMethod m);
DescentMethod descent_method_from_string(const std::string& s);

struct OptimizerConfig {
  DescentMethod method = DescentMethod::lbfgs;
  int max_iters = 5000;
  /// Absolute stopping threshold on max|grad|; when <= 0 the threshold is
  /// grad_tol_rel * max|grad J(v0)|.
  double grad_tol = 0.0;
  double grad_tol_rel = 1e-8;
  /// Initial trial step, measured in units of max-norm displacement for the
  /// first iteration.
  double step_init = 1.0;
  double armijo_c = 1e-4;
  double backtrack_factor = 0.5;
  /// Radius of the monitored ball B(M) (max-norm of the iterate).
  double M_monitor = 10.0;
  /// Number of curvature pairs retained by the quasi-Newton mode.
  int history_capacity = 10;

  bool operator==(const OptimizerConfig&) const = default;
};

void validate(const OptimizerConfig& cfg);

enum class TerminationReason { grad_tol, max_iters, line_search_failure };

std::string to_string(TerminationReason r);

struct OptimizeTrace {
  int iterates_count = 0;
  std::vector<double> objective_history;
  /// Accepted step length per iteration (history[i+1] was reached with steps[i]).
  std::vector<double> steps;
  std::vector<double> grad_norms;
  /// <grad, direction> at the start of each accepted step.
  std::vector<double> slopes;
  double final_grad_norm = 0.0;
  int ball_violations = 0;
  TerminationReason termination_reason = TerminationReason::max_iters;
};

/// Writes J into the return value and dJ/dv into the span.
using ObjectiveWithGradient = std::function<double(std::span<const double>, std::span<double>)>;

struct MinimizeResult {
  std::vector<double> v_min;
  OptimizeTrace trace;
};

/// Minimizes from v0 with monotone Armijo line searches. Every accepted step
/// satisfies J(v + t d) <= J(v) + armijo_c t <grad, d>; for steepest descent
/// d = -grad. A non-finite objective at v0 throws std::domain_error; trial
/// points with non-finite objective are treated as failed trials.
///
/// When `log` is non-null, one CSV line "iteration,objective,grad_norm,step"
/// is written per iteration.
MinimizeResult minimize(std::vector<double> v0, const ObjectiveWithGradient& objective,
                        const OptimizerConfig& cfg, std::ostream* log = nullptr);

}  // namespace hjcvx
