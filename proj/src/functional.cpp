#include "hjcvx/functional.hpp"

#include <cmath>
#include <stdexcept>

#include "hjcvx/summation.hpp"

namespace hjcvx {

namespace {

std::size_t axis_stride(const GridSpec& g, int axis) { return axis == 0 && g.dim == 2 ? g.n : 1; }

// Weights of the first-difference stencil used by gradient_h at axis index i:
// offsets are multiples of the axis stride.
struct Stencil3 {
  int offset[3];
  double coef[3];
};

Stencil3 first_difference(int i, int n, double h) {
  const double c = 1.0 / (2.0 * h);
  if (i == 0) return {{0, 1, 2}, {-3.0 * c, 4.0 * c, -c}};
  if (i == n - 1) return {{0, -1, -2}, {3.0 * c, -4.0 * c, c}};
  return {{-1, 1, 0}, {-c, c, 0.0}};
}

}  // namespace

double FunctionalConfig::effective_boundary_weight() const {
  if (boundary_weight) return *boundary_weight;
  const double l = carleman.lambda_c;
  return l * l * l * l;
}

void validate(const FunctionalConfig& cfg) {
  if (!(cfg.epsilon0 > 0.0)) throw std::invalid_argument("functional.epsilon0 must be positive");
  if (!(cfg.eta > 0.0)) throw std::invalid_argument("functional.eta must be positive");
  if (cfg.boundary_weight && !(*cfg.boundary_weight >= 0.0)) {
    throw std::invalid_argument("functional.boundary_weight must be ≥ 0");
  }
}

CarlemanFunctional::CarlemanFunctional(const GridSpec& grid, HamiltonianProblem problem, CutoffSpec cutoff,
                                       FunctionalConfig config)
    : grid_(grid),
      problem_(std::move(problem)),
      cutoff_(cutoff),
      config_(std::move(config)),
      weights_(weight_field(config_.carleman, grid_)) {
  validate(problem_);
  validate(config_);
  if (problem_.dim != grid_.dim) {
    throw std::invalid_argument("problem dimension " + std::to_string(problem_.dim) +
                                " does not match grid dimension " + std::to_string(grid_.dim));
  }
  nodes_.reserve(grid_.size());
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    NodeData d;
    d.x = grid_.node(k);
    d.chi = cutoff_value_grad(cutoff_, d.x);
    d.chi_pow_2k = std::pow(d.chi.value, 2.0 * problem_.growth_k);
    d.g = problem_.g(d.x);
    if (!std::isfinite(d.g)) {
      throw std::domain_error("right-hand side is not finite at node " + std::to_string(k));
    }
    d.faces = grid_.face_count(k);
    nodes_.push_back(d);
  }
}

ObjectiveReport CarlemanFunctional::run(std::span<const double> v, std::span<double> grad) const {
  const GridSpec& g = grid_;
  const std::size_t size = g.size();
  if (v.size() != size) throw std::invalid_argument("field size does not match functional grid");
  const bool want_grad = !grad.empty();
  if (want_grad && grad.size() != size) throw std::invalid_argument("gradient buffer has wrong size");

  const double h = g.h;
  const double inv_h2 = 1.0 / (h * h);
  const double cell = g.dim == 1 ? h : h * h;   // h^d
  const double face = g.dim == 1 ? 1.0 : h;     // h^(d-1)
  const double eps0 = config_.epsilon0;
  const double eta = config_.eta;
  const double bw = config_.effective_boundary_weight();

  // Adjoint seeds: dJ/dv, dJ/d(grad_h v), dJ/d(lap_h v) per node.
  std::vector<double> seed_v, seed_lap;
  std::vector<Point> seed_grad;
  if (want_grad) {
    seed_v.assign(size, 0.0);
    seed_lap.assign(size, 0.0);
    seed_grad.assign(size, Point{0.0, 0.0});
  }

  CompensatedSum residual_sum, boundary_sum, reg_sum;
  for (std::size_t k = 0; k < size; ++k) {
    const auto mi = g.multi_index(k);
    Point p{0.0, 0.0};
    for (int a = 0; a < g.dim; ++a) {
      const Stencil3 st = first_difference(mi[a], g.n, h);
      const auto s = static_cast<std::ptrdiff_t>(axis_stride(g, a));
      double acc = 0.0;
      for (int j = 0; j < 3; ++j) acc += st.coef[j] * v[k + st.offset[j] * s];
      p[a] = acc;
    }
    const NodeData& nd = nodes_[k];
    const double w = weights_[k];

    if (nd.faces > 0) {
      const double m = static_cast<double>(nd.faces);
      boundary_sum += m * w * (v[k] * v[k] + norm2(p));
      if (want_grad) {
        const double c = 2.0 * face * bw * m * w;
        seed_v[k] += c * v[k];
        seed_grad[k][0] += c * p[0];
        seed_grad[k][1] += c * p[1];
      }
      continue;
    }

    double lap = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      const std::size_t s = axis_stride(g, a);
      lap += v[k + s] - 2.0 * v[k] + v[k - s];
    }
    lap *= inv_h2;

    const TransformedTerms t = transform_F_at(problem_, nd.x, nd.chi, nd.chi_pow_2k, nd.g, v[k], p, want_grad);
    const double r = -eps0 * lap + t.F;
    residual_sum += w * r * r;
    reg_sum += v[k] * v[k] + norm2(p) + lap * lap;

    if (want_grad) {
      const double cr = 2.0 * cell * w * r;
      const double creg = 2.0 * cell * eta;
      seed_v[k] += cr * t.dF_ds + creg * v[k];
      seed_grad[k][0] += cr * t.dF_dp[0] + creg * p[0];
      seed_grad[k][1] += cr * t.dF_dp[1] + creg * p[1];
      seed_lap[k] += -cr * eps0 + creg * lap;
    }
  }

  ObjectiveReport rep;
  rep.residual_term = cell * residual_sum.value();
  rep.boundary_term = face * bw * boundary_sum.value();
  rep.regularization_term = eta * cell * reg_sum.value();
  rep.total = rep.residual_term + rep.boundary_term + rep.regularization_term;

  if (want_grad) {
    // Transposed stencils scatter each seed onto its footprint.
    for (std::size_t k = 0; k < size; ++k) grad[k] = seed_v[k];
    for (std::size_t k = 0; k < size; ++k) {
      const auto mi = g.multi_index(k);
      for (int a = 0; a < g.dim; ++a) {
        const Stencil3 st = first_difference(mi[a], g.n, h);
        const auto s = static_cast<std::ptrdiff_t>(axis_stride(g, a));
        for (int j = 0; j < 3; ++j) grad[k + st.offset[j] * s] += st.coef[j] * seed_grad[k][a];
      }
      if (seed_lap[k] != 0.0) {
        const double c = seed_lap[k] * inv_h2;
        for (int a = 0; a < g.dim; ++a) {
          const std::size_t s = axis_stride(g, a);
          grad[k + s] += c;
          grad[k - s] += c;
          grad[k] -= 2.0 * c;
        }
      }
    }
  }
  return rep;
}

ObjectiveReport CarlemanFunctional::evaluate(const ScalarField& v) const {
  if (!(v.grid() == grid_)) throw std::invalid_argument("field grid does not match functional grid");
  return run(v.values(), {});
}

double CarlemanFunctional::value(std::span<const double> v) const { return run(v, {}).total; }

ScalarField CarlemanFunctional::gradient(const ScalarField& v) const {
  if (!(v.grid() == grid_)) throw std::invalid_argument("field grid does not match functional grid");
  ScalarField out(grid_);
  run(v.values(), out.values());
  return out;
}

double CarlemanFunctional::value_and_gradient(std::span<const double> v, std::span<double> grad) const {
  return run(v, grad).total;
}

ScalarField CarlemanFunctional::residual(const ScalarField& v) const {
  const ScalarField lap = laplacian_h(v);
  ScalarField out(grid_);
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!grid_.is_interior(k)) continue;
    Point p{0.0, 0.0};
    for (int a = 0; a < grid_.dim; ++a) p[a] = partial_h(v, k, a);
    const NodeData& nd = nodes_[k];
    const double F = transform_F_at(problem_, nd.x, nd.chi, nd.chi_pow_2k, nd.g, v[k], p, false).F;
    out[k] = -config_.epsilon0 * lap[k] + F;
  }
  return out;
}

ScalarField residual_field(const ScalarField& v, const HamiltonianProblem& prob, const CutoffSpec& spec,
                           const FunctionalConfig& cfg) {
  return CarlemanFunctional(v.grid(), prob, spec, cfg).residual(v);
}

ObjectiveReport evaluate_J(const ScalarField& v, const HamiltonianProblem& prob, const CutoffSpec& spec,
                           const FunctionalConfig& cfg) {
  return CarlemanFunctional(v.grid(), prob, spec, cfg).evaluate(v);
}

ScalarField gradient_J(const ScalarField& v, const HamiltonianProblem& prob, const CutoffSpec& spec,
                       const FunctionalConfig& cfg) {
  return CarlemanFunctional(v.grid(), prob, spec, cfg).gradient(v);
}

double convexity_probe(const CarlemanFunctional& J, const ScalarField& v1, const ScalarField& v2) {
  const ScalarField grad = J.gradient(v2);
  CompensatedSum inner;
  for (std::size_t k = 0; k < v1.size(); ++k) inner += grad[k] * (v1[k] - v2[k]);
  return J.evaluate(v1).total - J.evaluate(v2).total - inner.value();
}

double convexity_probe(const ScalarField& v1, const ScalarField& v2, const HamiltonianProblem& prob,
                       const CutoffSpec& spec, const FunctionalConfig& cfg) {
  return convexity_probe(CarlemanFunctional(v1.grid(), prob, spec, cfg), v1, v2);
}

}  // namespace hjcvx
