#include "hjcvx/solver.hpp"

#include <chrono>
#include <cmath>
#include <future>

namespace hjcvx {

int ProblemSelection::dim() const {
  if (custom) return custom->dim;
  if (builtin) return *builtin <= 3 ? 1 : 2;
  throw std::invalid_argument("problem: neither builtin nor custom is set");
}

HamiltonianProblem make_problem(const ProblemSelection& sel) {
  if (sel.custom && sel.builtin) throw std::invalid_argument("problem: builtin and custom are exclusive");
  if (sel.custom) {
    const auto& c = *sel.custom;
    return custom_problem(c.dim, c.lambda_eq, c.hamiltonian, c.rhs, c.growth_k, c.exact);
  }
  if (sel.builtin) return builtin_problem(*sel.builtin, sel.rhs_variant);
  throw std::invalid_argument("problem: neither builtin nor custom is set");
}

SolveConfig reference_config(int test_id) {
  SolveConfig cfg;
  cfg.problem.builtin = test_id;
  cfg.dim = cfg.problem.dim();
  cfg.n = 70;
  cfg.half_width = 2.0;
  cfg.subdomain_half_width = 0.8;
  cfg.carleman = CarlemanParams{{9.0, 0.0}, 20.0, 3.0};
  cfg.functional.epsilon0 = 1e-3;
  cfg.functional.eta = 1e-3;
  cfg.functional.carleman = cfg.carleman;
  cfg.optimizer = benchmark_optimizer(test_id);
  return cfg;
}

void validate(const SolveConfig& cfg) {
  const GridSpec grid = build_grid(cfg.dim, cfg.n, cfg.half_width);
  if (cfg.problem.dim() != cfg.dim) {
    throw std::invalid_argument("grid.dim (" + std::to_string(cfg.dim) + ") does not match the problem dimension (" +
                                std::to_string(cfg.problem.dim()) + ")");
  }
  if (!(cfg.subdomain_half_width > 0.0 && cfg.subdomain_half_width < cfg.half_width)) {
    throw std::invalid_argument("cutoff.subdomain_half_width must lie in (0, grid.half_width)");
  }
  if (cfg.dim == 1 && cfg.carleman.x0[1] != 0.0) {
    throw std::invalid_argument("carleman.x0 must have one component in 1D");
  }
  validate(cfg.carleman, grid);
  validate(cfg.functional);
  validate(cfg.optimizer);
}

SolveError::SolveError(int step, const std::string& what)
    : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}

namespace {

template <class F>
auto at_step(int step, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const SolveError&) {
    throw;
  } catch (const std::exception& e) {
    throw SolveError(step, e.what());
  }
}

}  // namespace

SolveResult solve(const SolveConfig& cfg, std::ostream* log) {
  const auto start = std::chrono::steady_clock::now();
  at_step(1, [&] { validate(cfg); });

  const GridSpec grid = at_step(1, [&] { return build_grid(cfg.dim, cfg.n, cfg.half_width); });
  const CutoffSpec cutoff = at_step(1, [&] { return make_cutoff(grid, cfg.subdomain_half_width); });
  HamiltonianProblem problem = at_step(1, [&] { return make_problem(cfg.problem); });

  FunctionalConfig fcfg = cfg.functional;
  fcfg.carleman = cfg.carleman;
  at_step(2, [&] { (void)weight_field(fcfg.carleman, grid); });
  const CarlemanFunctional J = at_step(3, [&] { return CarlemanFunctional(grid, problem, cutoff, fcfg); });

  MinimizeResult mr = at_step(4, [&] {
    return minimize(std::vector<double>(grid.size(), 0.0),
                    [&J](std::span<const double> v, std::span<double> g) {
                      return g.empty() ? J.value(v) : J.value_and_gradient(v, g);
                    },
                    cfg.optimizer, log);
  });

  return at_step(5, [&] {
    SolveResult res;
    res.v_min = ScalarField(grid, std::move(mr.v_min));
    res.trace = std::move(mr.trace);
    res.final_objective = J.evaluate(res.v_min);
    res.cutoff = cutoff;
    res.u_on_G = recover_u(res.v_min, cutoff);
    if (problem.u_true) {
      SubdomainField truth = eval_on_subdomain(res.u_on_G.nodes, *problem.u_true);
      res.max_relative_error = relative_sup_error(res.u_on_G, truth);
      double scale = 0.0;
      for (double t : truth.values) scale = std::max(scale, std::abs(t));
      SubdomainField err{truth.nodes, std::vector<double>(truth.values.size())};
      for (std::size_t k = 0; k < err.values.size(); ++k) {
        err.values[k] = std::abs(res.u_on_G.values[k] - truth.values[k]) / scale;
      }
      res.u_true_on_G = std::move(truth);
      res.error_field = std::move(err);
    }
    res.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
  });
}

bool BenchmarkRow::within_factor() const {
  if (!failure.empty()) return false;
  const double r = ratio();
  return std::isfinite(r) && r >= 1.0 / kAcceptanceFactor && r <= kAcceptanceFactor;
}

OptimizerConfig benchmark_optimizer(int test_id) {
  OptimizerConfig opt;
  opt.method = DescentMethod::lbfgs;
  opt.history_capacity = 10;
  opt.grad_tol_rel = 1e-8;
  opt.max_iters = test_id <= 3 ? 20000 : 60000;
  return opt;
}

std::vector<BenchmarkRow> run_benchmark_suite(const BenchmarkOptions& opts) {
  auto run_one = [&opts](int id) {
    BenchmarkRow row;
    row.test_id = id;
    if (id >= 1 && id <= kBuiltinCount) row.reference_error = kReferenceErrors[id - 1];
    try {
      SolveConfig cfg = reference_config(id);
      if (opts.optimizer) cfg.optimizer = *opts.optimizer;
      const SolveResult res = solve(cfg);
      row.max_relative_error = res.max_relative_error.value_or(NAN);
      row.iterations = res.trace.iterates_count;
      row.wall_time_s = res.wall_time_s;
      row.termination = to_string(res.trace.termination_reason);
    } catch (const std::exception& e) {
      row.failure = e.what();
      row.max_relative_error = NAN;
    }
    return row;
  };

  std::vector<BenchmarkRow> rows;
  if (opts.parallel) {
    std::vector<std::future<BenchmarkRow>> jobs;
    for (int id : opts.test_ids) jobs.push_back(std::async(std::launch::async, run_one, id));
    for (auto& j : jobs) rows.push_back(j.get());
  } else {
    for (int id : opts.test_ids) rows.push_back(run_one(id));
  }
  return rows;
}

}  // namespace hjcvx
