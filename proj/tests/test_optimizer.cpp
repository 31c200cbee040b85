#include <cmath>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "hjcvx/optimizer.hpp"

using namespace hjcvx;
using doctest::Approx;

namespace {

double sum_of_squares(std::span<const double> v, std::span<double> g) {
  double f = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    f += v[i] * v[i];
    if (!g.empty()) g[i] = 2.0 * v[i];
  }
  return f;
}

// Ill-conditioned quadratic sum_i c_i (v_i - 1)^2 with c_i spanning 1..100.
double stretched(std::span<const double> v, std::span<double> g) {
  double f = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double c = 1.0 + 99.0 * i / (v.size() - 1);
    f += c * (v[i] - 1.0) * (v[i] - 1.0);
    if (!g.empty()) g[i] = 2.0 * c * (v[i] - 1.0);
  }
  return f;
}

double rosenbrock(std::span<const double> v, std::span<double> g) {
  const double a = 1.0 - v[0], b = v[1] - v[0] * v[0];
  if (!g.empty()) {
    g[0] = -2.0 * a - 400.0 * v[0] * b;
    g[1] = 200.0 * b;
  }
  return a * a + 100.0 * b * b;
}

void check_trace(const OptimizeTrace& t, const OptimizerConfig& cfg) {
  REQUIRE(t.objective_history.size() == static_cast<std::size_t>(t.iterates_count) + 1);
  REQUIRE(t.steps.size() == static_cast<std::size_t>(t.iterates_count));
  CHECK(t.objective_history.size() <= static_cast<std::size_t>(cfg.max_iters) + 1);
  for (int i = 0; i < t.iterates_count; ++i) {
    CHECK(t.objective_history[i + 1] < t.objective_history[i]);
    CHECK(t.slopes[i] < 0.0);
    CHECK(t.objective_history[i + 1] <= t.objective_history[i] + cfg.armijo_c * t.steps[i] * t.slopes[i]);
  }
}

}  // namespace

TEST_CASE("defaults and validation") {
  OptimizerConfig c;
  CHECK(c.max_iters == 5000);
  CHECK(c.grad_tol_rel == 1e-8);
  CHECK_NOTHROW(validate(c));
  auto bad = [](auto mutate) {
    OptimizerConfig o;
    mutate(o);
    return o;
  };
  CHECK_THROWS_AS(validate(bad([](OptimizerConfig& o) { o.max_iters = 0; })), std::invalid_argument);
  CHECK_THROWS_AS(validate(bad([](OptimizerConfig& o) { o.armijo_c = 1.0; })), std::invalid_argument);
  CHECK_THROWS_AS(validate(bad([](OptimizerConfig& o) { o.armijo_c = 0.0; })), std::invalid_argument);
  CHECK_THROWS_AS(validate(bad([](OptimizerConfig& o) { o.backtrack_factor = 1.0; })), std::invalid_argument);
  CHECK_THROWS_AS(validate(bad([](OptimizerConfig& o) { o.step_init = 0.0; })), std::invalid_argument);
  CHECK_THROWS_AS(validate(bad([](OptimizerConfig& o) { o.M_monitor = -1.0; })), std::invalid_argument);
  CHECK_THROWS_AS(validate(bad([](OptimizerConfig& o) { o.history_capacity = 0; })), std::invalid_argument);

  CHECK(descent_method_from_string("gradient_descent") == DescentMethod::gradient_descent);
  CHECK(descent_method_from_string("lbfgs") == DescentMethod::lbfgs);
  CHECK(to_string(DescentMethod::lbfgs) == "lbfgs");
  CHECK_THROWS_AS(descent_method_from_string("newton"), std::invalid_argument);
  CHECK(to_string(TerminationReason::line_search_failure) == "line_search_failure");
}

TEST_CASE("sum of squares from a single spike") {
  for (DescentMethod m : {DescentMethod::gradient_descent, DescentMethod::lbfgs}) {
    CAPTURE(to_string(m));
    OptimizerConfig cfg;
    cfg.method = m;
    std::vector<double> v0(20, 0.0);
    v0[4] = 3.0;
    const MinimizeResult r = minimize(v0, sum_of_squares, cfg);
    CHECK(r.trace.termination_reason == TerminationReason::grad_tol);
    CHECK(r.trace.final_grad_norm <= 1e-8 * 6.0);
    // max|grad| = 2 max|v| <= 1e-8 * 6
    for (double e : r.v_min) CHECK(std::abs(e) <= 3e-8);
    check_trace(r.trace, cfg);
  }
}

TEST_CASE("ill-conditioned quadratic") {
  for (DescentMethod m : {DescentMethod::gradient_descent, DescentMethod::lbfgs}) {
    CAPTURE(to_string(m));
    OptimizerConfig cfg;
    cfg.method = m;
    const MinimizeResult r = minimize(std::vector<double>(30, 0.0), stretched, cfg);
    CHECK(r.trace.termination_reason == TerminationReason::grad_tol);
    // Stopping at 1e-8 * 200 bounds |v - 1| by 1e-6 on the weakest axis.
    for (double e : r.v_min) CHECK(std::abs(e - 1.0) <= 1e-6);
    check_trace(r.trace, cfg);
  }
}

TEST_CASE("quasi-Newton needs fewer iterations than steepest descent") {
  OptimizerConfig gd, qn;
  gd.method = DescentMethod::gradient_descent;
  gd.max_iters = 100000;
  qn.max_iters = 100000;
  const MinimizeResult a = minimize({-1.2, 1.0}, rosenbrock, gd);
  const MinimizeResult b = minimize({-1.2, 1.0}, rosenbrock, qn);
  CHECK(b.trace.termination_reason == TerminationReason::grad_tol);
  CHECK(b.v_min[0] == Approx(1.0).epsilon(1e-6));
  CHECK(b.v_min[1] == Approx(1.0).epsilon(1e-6));
  CHECK(b.trace.iterates_count < a.trace.iterates_count);
  check_trace(a.trace, gd);
  check_trace(b.trace, qn);
}

TEST_CASE("iteration budget") {
  OptimizerConfig cfg;
  cfg.method = DescentMethod::gradient_descent;
  cfg.max_iters = 7;
  const MinimizeResult r = minimize({-1.2, 1.0}, rosenbrock, cfg);
  CHECK(r.trace.termination_reason == TerminationReason::max_iters);
  CHECK(r.trace.iterates_count == 7);
  CHECK(r.trace.objective_history.size() == 8u);
}

TEST_CASE("line search failure is reported, not thrown") {
  // The supplied gradient points uphill, so no step decreases the objective.
  const ObjectiveWithGradient wrong = [](std::span<const double> v, std::span<double> g) {
    const double f = sum_of_squares(v, g);
    for (double& e : g) e = -e;
    return f;
  };
  for (DescentMethod m : {DescentMethod::gradient_descent, DescentMethod::lbfgs}) {
    OptimizerConfig cfg;
    cfg.method = m;
    const MinimizeResult r = minimize({1.0, -2.0}, wrong, cfg);
    CHECK(r.trace.termination_reason == TerminationReason::line_search_failure);
    CHECK(r.trace.iterates_count == 0);
    CHECK(r.v_min == std::vector<double>{1.0, -2.0});
  }
}

TEST_CASE("non-finite trial points are rejected") {
  // log barrier: infinite outside v > 0.
  const ObjectiveWithGradient barrier = [](std::span<const double> v, std::span<double> g) {
    if (v[0] <= 0.0) return std::numeric_limits<double>::infinity();
    if (!g.empty()) g[0] = 1.0 - 1.0 / v[0];
    return v[0] - std::log(v[0]);
  };
  OptimizerConfig cfg;
  cfg.step_init = 100.0;
  const MinimizeResult r = minimize({0.05}, barrier, cfg);
  CHECK(r.v_min[0] == Approx(1.0).epsilon(1e-6));
  check_trace(r.trace, cfg);

  CHECK_THROWS_AS(minimize({-1.0}, barrier, cfg), std::domain_error);
}

TEST_CASE("ball monitoring") {
  OptimizerConfig cfg;
  cfg.M_monitor = 0.5;
  const MinimizeResult r = minimize(std::vector<double>(10, 0.0), stretched, cfg);
  CHECK(r.trace.ball_violations > 0);
  cfg.M_monitor = 10.0;
  CHECK(minimize(std::vector<double>(10, 0.0), stretched, cfg).trace.ball_violations == 0);
}

TEST_CASE("repeated runs are bit-identical") {
  OptimizerConfig cfg;
  const MinimizeResult a = minimize({-1.2, 1.0}, rosenbrock, cfg);
  const MinimizeResult b = minimize({-1.2, 1.0}, rosenbrock, cfg);
  CHECK(a.v_min == b.v_min);
  CHECK(a.trace.objective_history == b.trace.objective_history);
  CHECK(a.trace.steps == b.trace.steps);
}

TEST_CASE("iteration log") {
  OptimizerConfig cfg;
  std::ostringstream log;
  const MinimizeResult r = minimize({-1.2, 1.0}, rosenbrock, cfg, &log);
  std::istringstream in(log.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "iteration,objective,grad_norm,step");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == r.trace.iterates_count + 1);
}
