#include "hjcvx/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <ostream>
#include <stdexcept>

#include "hjcvx/summation.hpp"

namespace hjcvx {

namespace {

constexpr double kMinStep = 1e-16;

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double e : x) m = std::max(m, std::abs(e));
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  CompensatedSum s;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s.value();
}

struct CurvaturePair {
  std::vector<double> s;
  std::vector<double> y;
  double rho;
};

// Two-loop recursion: d = -H g.
void lbfgs_direction(const std::deque<CurvaturePair>& memory, std::span<const double> g,
                     std::vector<double>& d) {
  d.assign(g.begin(), g.end());
  std::vector<double> alpha(memory.size());
  for (std::size_t i = memory.size(); i-- > 0;) {
    const auto& m = memory[i];
    alpha[i] = m.rho * dot(m.s, d);
    for (std::size_t j = 0; j < d.size(); ++j) d[j] -= alpha[i] * m.y[j];
  }
  if (!memory.empty()) {
    const auto& last = memory.back();
    const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
    for (double& e : d) e *= gamma;
  }
  for (std::size_t i = 0; i < memory.size(); ++i) {
    const auto& m = memory[i];
    const double beta = m.rho * dot(m.y, d);
    for (std::size_t j = 0; j < d.size(); ++j) d[j] += (alpha[i] - beta) * m.s[j];
  }
  for (double& e : d) e = -e;
}

}  // namespace

std::string to_string(DescentMethod m) {
  return m == DescentMethod::gradient_descent ? "gradient_descent" : "lbfgs";
}

DescentMethod descent_method_from_string(const std::string& s) {
  if (s == "gradient_descent") return DescentMethod::gradient_descent;
  if (s == "lbfgs") return DescentMethod::lbfgs;
  throw std::invalid_argument("optimizer.method must be \"gradient_descent\" or \"lbfgs\", got \"" + s + "\"");
}

std::string to_string(TerminationReason r) {
  switch (r) {
    case TerminationReason::grad_tol: return "grad_tol";
    case TerminationReason::max_iters: return "max_iters";
    case TerminationReason::line_search_failure: return "line_search_failure";
  }
  return "unknown";
}

void validate(const OptimizerConfig& cfg) {
  if (cfg.max_iters < 1) throw std::invalid_argument("optimizer.max_iters must be ≥ 1");
  if (!(cfg.armijo_c > 0.0 && cfg.armijo_c < 1.0)) {
    throw std::invalid_argument("optimizer.armijo_c must lie in (0, 1)");
  }
  if (!(cfg.backtrack_factor > 0.0 && cfg.backtrack_factor < 1.0)) {
    throw std::invalid_argument("optimizer.backtrack_factor must lie in (0, 1)");
  }
  if (!(cfg.step_init > 0.0)) throw std::invalid_argument("optimizer.step_init must be positive");
  if (!(cfg.grad_tol >= 0.0)) throw std::invalid_argument("optimizer.grad_tol must be ≥ 0");
  if (!(cfg.grad_tol_rel >= 0.0)) throw std::invalid_argument("optimizer.grad_tol_rel must be ≥ 0");
  if (!(cfg.M_monitor > 0.0)) throw std::invalid_argument("optimizer.M_monitor must be positive");
  if (cfg.history_capacity < 1) throw std::invalid_argument("optimizer.history_capacity must be ≥ 1");
}

MinimizeResult minimize(std::vector<double> v0, const ObjectiveWithGradient& objective,
                        const OptimizerConfig& cfg, std::ostream* log) {
  validate(cfg);
  const std::size_t n = v0.size();
  MinimizeResult out;
  OptimizeTrace& tr = out.trace;

  std::vector<double> v = std::move(v0);
  std::vector<double> g(n), trial(n), trial_g(n), d(n);
  double f = objective(v, g);
  if (!std::isfinite(f)) throw std::domain_error("objective is not finite at the initial iterate");

  double gnorm = max_abs(g);
  const double tol = cfg.grad_tol > 0.0 ? cfg.grad_tol : cfg.grad_tol_rel * gnorm;
  tr.objective_history.push_back(f);
  tr.grad_norms.push_back(gnorm);
  if (log) *log << "iteration,objective,grad_norm,step\n0," << format_double(f) << ',' << format_double(gnorm) << ",0\n";

  std::deque<CurvaturePair> memory;
  double last_step = 0.0;
  tr.termination_reason = TerminationReason::max_iters;
  if (gnorm <= tol) tr.termination_reason = TerminationReason::grad_tol;

  for (int it = 0; it < cfg.max_iters && gnorm > tol; ++it) {
    const bool quasi_newton = cfg.method == DescentMethod::lbfgs && !memory.empty();
    if (quasi_newton) {
      lbfgs_direction(memory, g, d);
    } else {
      for (std::size_t j = 0; j < n; ++j) d[j] = -g[j];
    }
    double slope = dot(g, d);
    if (quasi_newton && !(slope < 0.0)) {
      memory.clear();
      for (std::size_t j = 0; j < n; ++j) d[j] = -g[j];
      slope = dot(g, d);
    }

    double t;
    if (quasi_newton) {
      t = 1.0;
    } else if (last_step > 0.0 && cfg.method == DescentMethod::gradient_descent) {
      t = 2.0 * last_step;
    } else {
      t = cfg.step_init / max_abs(d);
    }

    bool accepted = false;
    double ft = f;
    while (t >= kMinStep) {
      for (std::size_t j = 0; j < n; ++j) trial[j] = v[j] + t * d[j];
      ft = objective(trial, {});
      if (std::isfinite(ft) && ft <= f + cfg.armijo_c * t * slope && ft < f) {
        accepted = true;
        break;
      }
      t *= cfg.backtrack_factor;
    }
    if (!accepted) {
      if (quasi_newton) {
        // Retry from the steepest-descent direction before giving up.
        memory.clear();
        --it;
        continue;
      }
      tr.termination_reason = TerminationReason::line_search_failure;
      break;
    }

    const double ft_full = objective(trial, trial_g);
    if (ft_full != ft) throw std::logic_error("objective is not deterministic");

    if (cfg.method == DescentMethod::lbfgs) {
      CurvaturePair pair{std::vector<double>(n), std::vector<double>(n), 0.0};
      for (std::size_t j = 0; j < n; ++j) {
        pair.s[j] = trial[j] - v[j];
        pair.y[j] = trial_g[j] - g[j];
      }
      const double sy = dot(pair.s, pair.y);
      const double yy = dot(pair.y, pair.y);
      if (sy > 1e-12 * std::sqrt(dot(pair.s, pair.s) * yy)) {
        pair.rho = 1.0 / sy;
        memory.push_back(std::move(pair));
        if (static_cast<int>(memory.size()) > cfg.history_capacity) memory.pop_front();
      }
    }

    v.swap(trial);
    g.swap(trial_g);
    f = ft;
    gnorm = max_abs(g);
    last_step = t;
    ++tr.iterates_count;
    tr.objective_history.push_back(f);
    tr.steps.push_back(t);
    tr.slopes.push_back(slope);
    tr.grad_norms.push_back(gnorm);
    if (max_abs(v) > cfg.M_monitor) ++tr.ball_violations;
    if (log) {
      *log << tr.iterates_count << ',' << format_double(f) << ',' << format_double(gnorm) << ','
           << format_double(t) << '\n';
    }
    if (gnorm <= tol) tr.termination_reason = TerminationReason::grad_tol;
  }

  tr.final_grad_norm = gnorm;
  out.v_min = std::move(v);
  return out;
}

}  // namespace hjcvx
