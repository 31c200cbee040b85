#include "hjcvx/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "hjcvx/config.hpp"
#include "hjcvx/summation.hpp"

namespace hjcvx {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

ScalarField random_smooth_field(const GridSpec& grid, double amplitude, std::mt19937_64& rng) {
  constexpr int kModes = 4;
  struct Mode {
    double coef;
    double freq[kMaxDim];
    double phase[kMaxDim];
  };
  const double kmax = 1.5 * std::numbers::pi / grid.half_width;
  std::vector<Mode> modes(kModes);
  for (auto& m : modes) {
    m.coef = uniform(rng, -1.0, 1.0);
    for (int a = 0; a < kMaxDim; ++a) {
      m.freq[a] = uniform(rng, 0.0, kmax);
      m.phase[a] = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    }
  }
  ScalarField v = eval_on_grid(grid, [&](const Point& x) {
    double sum = 0.0;
    for (const auto& m : modes) {
      double term = m.coef;
      for (int a = 0; a < grid.dim; ++a) term *= std::cos(m.freq[a] * x[a] + m.phase[a]);
      sum += term;
    }
    return sum;
  });
  const double target = amplitude * uniform(rng, 0.2, 1.0);
  const double peak = v.max_abs();
  if (peak > 0.0) {
    for (double& e : v.values()) e *= target / peak;
  }
  return v;
}

BumpShape random_bump_shape(int dim, std::mt19937_64& rng) {
  BumpShape s;
  for (int a = 0; a < dim; ++a) {
    s.freq.push_back(uniform(rng, 0.5, 3.0));
    s.phase.push_back(uniform(rng, 0.0, 2.0 * std::numbers::pi));
  }
  s.offset = uniform(rng, 1.5, 3.0);
  return s;
}

ScalarField bump_field(const GridSpec& grid, const BumpShape& shape) {
  const double r2 = grid.half_width * grid.half_width;
  return eval_on_grid(grid, [&](const Point& x) {
    double v = 1.0;
    for (int a = 0; a < grid.dim; ++a) {
      const double envelope = r2 - x[a] * x[a];
      v *= envelope * envelope * (shape.offset + std::sin(shape.freq[a] * x[a] + shape.phase[a]));
    }
    return v;
  });
}

GradientCheck check_gradient(const ObjectiveWithGradient& objective, const GridSpec& grid, int directions,
                             double eps, std::mt19937_64& rng) {
  GradientCheck out;
  std::vector<double> grad(grid.size());
  std::vector<double> plus(grid.size()), minus(grid.size());
  for (int i = 0; i < directions; ++i) {
    const ScalarField v = random_smooth_field(grid, 1.0, rng);
    std::vector<double> d(grid.size());
    for (double& e : d) e = uniform(rng, -1.0, 1.0);

    objective(v.values(), grad);
    CompensatedSum analytic;
    for (std::size_t k = 0; k < d.size(); ++k) analytic += grad[k] * d[k];
    for (std::size_t k = 0; k < d.size(); ++k) {
      plus[k] = v[k] + eps * d[k];
      minus[k] = v[k] - eps * d[k];
    }
    const double fd = (objective(plus, {}) - objective(minus, {})) / (2.0 * eps);
    const double an = analytic.value();
    const double rel = std::abs(fd - an) / std::max(std::abs(an), std::numeric_limits<double>::min());
    out.max_rel_discrepancy = std::max(out.max_rel_discrepancy, rel);
    ++out.directions;
  }
  return out;
}

ConvexityCheck check_convexity(const CarlemanFunctional& J, int pairs, double radius, std::mt19937_64& rng) {
  ConvexityCheck out;
  out.min_gap = std::numeric_limits<double>::infinity();
  out.min_symmetrized_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < pairs; ++i) {
    const ScalarField v1 = random_smooth_field(J.grid(), radius, rng);
    const ScalarField v2 = random_smooth_field(J.grid(), radius, rng);
    const double g12 = convexity_probe(J, v1, v2);
    const double g21 = convexity_probe(J, v2, v1);
    out.min_gap = std::min({out.min_gap, g12, g21});
    out.min_symmetrized_gap = std::min(out.min_symmetrized_gap, g12 + g21);
    ++out.pairs;
  }
  return out;
}

CarlemanCheck check_carleman(const CarlemanParams& p, int dim, double half_width, int n_coarse, int n_fine,
                             int bumps, std::mt19937_64& rng) {
  const GridSpec coarse = build_grid(dim, n_coarse, half_width);
  const GridSpec fine = build_grid(dim, n_fine, half_width);
  CarlemanCheck out;
  out.min_ratio = std::numeric_limits<double>::infinity();
  for (int i = 0; i < bumps; ++i) {
    const BumpShape shape = random_bump_shape(dim, rng);
    const double rc = carleman_estimate_ratio(p, bump_field(coarse, shape));
    const double rf = carleman_estimate_ratio(p, bump_field(fine, shape));
    out.min_ratio = std::min({out.min_ratio, rc, rf});
    out.max_refinement_change = std::max(out.max_refinement_change, std::abs(rf - rc) / rc);
    ++out.bumps;
  }
  return out;
}

DiagnosticsReport run_diagnostics(const SolveConfig& cfg, std::uint64_t seed) {
  validate(cfg);
  const GridSpec grid = build_grid(cfg.dim, cfg.n, cfg.half_width);
  const CutoffSpec cutoff = make_cutoff(grid, cfg.subdomain_half_width);
  FunctionalConfig fcfg = cfg.functional;
  fcfg.carleman = cfg.carleman;
  const CarlemanFunctional J(grid, make_problem(cfg.problem), cutoff, fcfg);

  DiagnosticsReport r;
  r.seed = seed;
  std::mt19937_64 rng(seed);
  r.gradient = check_gradient(
      [&J](std::span<const double> v, std::span<double> g) {
        return g.empty() ? J.value(v) : J.value_and_gradient(v, g);
      },
      grid, 10, 1e-6, rng);
  r.convexity = check_convexity(J, 100, 1.0, rng);
  try {
    r.carleman = check_carleman(cfg.carleman, cfg.dim, cfg.half_width, 40, 80, 50, rng);
  } catch (const std::invalid_argument& e) {
    r.carleman.min_ratio = std::numeric_limits<double>::quiet_NaN();
    r.carleman.error = e.what();
  }
  return r;
}

nlohmann::json to_json(const DiagnosticsReport& r, const SolveConfig& cfg) {
  using nlohmann::json;
  json x0 = json::array({cfg.carleman.x0[0]});
  if (cfg.dim == 2) x0.push_back(cfg.carleman.x0[1]);
  return {
      {"seed", r.seed},
      {"gradient_check",
       {{"max_rel_discrepancy", r.gradient.max_rel_discrepancy},
        {"directions", r.gradient.directions},
        {"tolerance", kGradientTolerance},
        {"passed", r.gradient_ok()}}},
      {"convexity_probe",
       {{"min_gap", r.convexity.min_gap},
        {"min_symmetrized_gap", r.convexity.min_symmetrized_gap},
        {"pairs", r.convexity.pairs},
        {"passed", r.convexity_ok()}}},
      {"carleman_estimate",
       {{"ratio", r.carleman.min_ratio},
        {"max_refinement_change", r.carleman.max_refinement_change},
        {"bumps", r.carleman.bumps},
        {"n", json::array({40, 80})},
        {"beta", cfg.carleman.beta},
        {"lambda_c", cfg.carleman.lambda_c},
        {"x0", x0},
        {"error", r.carleman.error.empty() ? json(nullptr) : json(r.carleman.error)},
        {"passed", r.carleman_ok()}}},
      {"passed", r.passed()},
  };
}

}  // namespace hjcvx
