#include "hjcvx/problem.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "hjcvx/expression.hpp"

namespace hjcvx {

namespace {

constexpr double kPi = std::numbers::pi;

double smooth_sign(double t) { return t / std::sqrt(t * t + kAbsSmoothing * kAbsSmoothing); }

// sqrt(|p|^2 + 1), used by benchmarks 1-4.
double eikonal_like(const Point&, const Point& p) { return std::sqrt(norm2(p) + 1.0); }
Point eikonal_like_dp(const Point&, const Point& p) {
  const double r = std::sqrt(norm2(p) + 1.0);
  return {p[0] / r, p[1] / r};
}

// |p1| - |p2|, used by benchmarks 5 and 6.
double difference_of_abs(const Point&, const Point& p) { return std::abs(p[0]) - std::abs(p[1]); }
Point difference_of_abs_dp(const Point&, const Point& p) { return {smooth_sign(p[0]), -smooth_sign(p[1])}; }

HamiltonianProblem benchmark1() {
  HamiltonianProblem p;
  p.name = "benchmark-1";
  p.dim = 1;
  p.lambda_eq = 6.0;
  p.H = eikonal_like;
  p.dH_dp = eikonal_like_dp;
  p.g = [](const Point& x) {
    const double s = std::sin(kPi * x[0]);
    const double c = std::cos(kPi * x[0]);
    return 6.0 * std::exp(s) + std::sqrt(kPi * kPi * c * c * std::exp(2.0 * s) + 1.0);
  };
  p.u_true = [](const Point& x) { return std::exp(std::sin(kPi * x[0])); };
  p.u_true_grad = [](const Point& x) {
    return Point{kPi * std::cos(kPi * x[0]) * std::exp(std::sin(kPi * x[0])), 0.0};
  };
  return p;
}

HamiltonianProblem benchmark2() {
  HamiltonianProblem p;
  p.name = "benchmark-2";
  p.dim = 1;
  p.lambda_eq = 5.0;
  p.H = eikonal_like;
  p.dH_dp = eikonal_like_dp;
  p.g = [](const Point& x) {
    const double t = x[0];
    const double a = 0.5 * kPi * t * t * t * t;
    const double c = std::cos(a);
    return 5.0 * std::sin(a) + std::sqrt(4.0 * kPi * kPi * std::pow(t, 6) * c * c + 1.0);
  };
  p.u_true = [](const Point& x) { return std::sin(0.5 * kPi * std::pow(x[0], 4)); };
  p.u_true_grad = [](const Point& x) {
    const double t = x[0];
    return Point{2.0 * kPi * t * t * t * std::cos(0.5 * kPi * t * t * t * t), 0.0};
  };
  return p;
}

HamiltonianProblem benchmark3(RhsVariant variant) {
  HamiltonianProblem p;
  p.name = "benchmark-3";
  p.dim = 1;
  p.lambda_eq = 10.0;
  p.H = eikonal_like;
  p.dH_dp = eikonal_like_dp;
  const bool printed = variant == RhsVariant::as_printed;
  // u* = -|2x| + sin x; the kink at x = 0 takes the x >= 0 branch.
  p.g = [printed](const Point& x) {
    const double t = x[0];
    const double u = -std::abs(2.0 * t) + std::sin(t);
    const double slope_part = printed ? std::sin(t) : std::cos(t);
    const double slope = t >= 0.0 ? -2.0 + slope_part : 2.0 + slope_part;
    return 10.0 * u + std::sqrt(slope * slope + 1.0);
  };
  p.u_true = [](const Point& x) { return -std::abs(2.0 * x[0]) + std::sin(x[0]); };
  p.u_true_grad = [](const Point& x) {
    return Point{(x[0] >= 0.0 ? -2.0 : 2.0) + std::cos(x[0]), 0.0};
  };
  return p;
}

HamiltonianProblem benchmark4() {
  HamiltonianProblem p;
  p.name = "benchmark-4";
  p.dim = 2;
  p.lambda_eq = 7.0;
  p.H = eikonal_like;
  p.dH_dp = eikonal_like_dp;
  p.g = [](const Point& x) {
    const double a = 0.5 * kPi * (x[0] * x[0] - (x[1] - 0.2) * (x[1] - 0.2));
    const double c2 = std::cos(a) * std::cos(a);
    const double ym = -2.0 * x[1] + 0.4;
    return 7.0 * std::sin(a) +
           0.5 * std::sqrt(4.0 * kPi * kPi * x[0] * x[0] * c2 + kPi * kPi * ym * ym * c2 + 4.0);
  };
  p.u_true = [](const Point& x) {
    return std::sin(0.5 * kPi * (x[0] * x[0] - (x[1] - 0.2) * (x[1] - 0.2)));
  };
  p.u_true_grad = [](const Point& x) {
    const double c = std::cos(0.5 * kPi * (x[0] * x[0] - (x[1] - 0.2) * (x[1] - 0.2)));
    return Point{kPi * x[0] * c, -kPi * (x[1] - 0.2) * c};
  };
  return p;
}

HamiltonianProblem benchmark5() {
  HamiltonianProblem p;
  p.name = "benchmark-5";
  p.dim = 2;
  p.lambda_eq = 10.0;
  p.H = difference_of_abs;
  p.dH_dp = difference_of_abs_dp;
  p.g = [](const Point& x) {
    const double arg = x[0] * x[0] + x[1];
    const double s = std::sin(arg);
    return -10.0 * x[0] + 10.0 * std::cos(arg) + std::abs(1.0 + 2.0 * x[0] * s) - std::abs(s);
  };
  p.u_true = [](const Point& x) { return -x[0] + std::cos(x[0] * x[0] + x[1]); };
  p.u_true_grad = [](const Point& x) {
    const double s = std::sin(x[0] * x[0] + x[1]);
    return Point{-1.0 - 2.0 * x[0] * s, -s};
  };
  return p;
}

HamiltonianProblem benchmark6(RhsVariant variant) {
  HamiltonianProblem p;
  p.name = "benchmark-6";
  p.dim = 2;
  p.lambda_eq = 10.0;
  p.H = difference_of_abs;
  p.dH_dp = difference_of_abs_dp;
  const double factor = variant == RhsVariant::as_printed ? 2.0 : 1.0;
  // u* = -|2x| + cos(x^2 + pi y); the kink along x = 0 takes the x >= 0 branch.
  p.g = [factor](const Point& x) {
    const double arg = x[0] * x[0] + kPi * x[1];
    const double s = std::sin(arg);
    const double u = -std::abs(2.0 * x[0]) + std::cos(arg);
    const double ux_abs = x[0] >= 0.0 ? 2.0 * std::abs(1.0 + factor * x[0] * s)
                                      : 2.0 * std::abs(1.0 - factor * x[0] * s);
    return 10.0 * u + ux_abs - kPi * std::abs(s);
  };
  p.u_true = [](const Point& x) { return -std::abs(2.0 * x[0]) + std::cos(x[0] * x[0] + kPi * x[1]); };
  p.u_true_grad = [](const Point& x) {
    const double s = std::sin(x[0] * x[0] + kPi * x[1]);
    return Point{(x[0] >= 0.0 ? -2.0 : 2.0) - 2.0 * x[0] * s, -kPi * s};
  };
  return p;
}

}  // namespace

void validate(const HamiltonianProblem& prob) {
  if (prob.dim < 1 || prob.dim > kMaxDim) throw std::invalid_argument("problem.dim must be 1 or 2");
  if (!(prob.lambda_eq > 0.0)) throw std::invalid_argument("problem.lambda must be positive");
  if (!(prob.growth_k > 0.0)) throw std::invalid_argument("problem.growth_k must be positive");
  if (!prob.H || !prob.dH_dp || !prob.g) {
    throw std::invalid_argument("problem is missing its Hamiltonian or right-hand side");
  }
}

CutoffSpec make_cutoff(const GridSpec& grid, double subdomain_half_width) {
  const SubdomainNodes nodes = subdomain_nodes(grid, subdomain_half_width);
  CutoffSpec spec;
  spec.subdomain_half_width = subdomain_half_width;
  spec.delta = std::exp(-0.5 * grid.half_width * grid.half_width);
  double c = 1.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    c = std::min(c, cutoff_value_grad(spec, nodes.node(k)).value);
  }
  spec.c = c;
  return spec;
}

CutoffEval cutoff_value_grad(const CutoffSpec&, const Point& x) {
  const double value = std::exp(-0.5 * norm2(x));
  return {value, {-x[0] * value, -x[1] * value}};
}

TransformedTerms transform_F_at(const HamiltonianProblem& prob, const Point& x, const CutoffEval& chi,
                                double chi_pow_2k, double g_x, double s, const Point& p,
                                bool with_partials) {
  const double inv_chi = 1.0 / chi.value;
  const double inv_chi2 = inv_chi * inv_chi;
  const Point q{(chi.value * p[0] - s * chi.grad[0]) * inv_chi2,
                (chi.value * p[1] - s * chi.grad[1]) * inv_chi2};
  TransformedTerms out{};
  out.F = chi_pow_2k * (prob.lambda_eq * s * inv_chi + prob.H(x, q) - g_x);
  if (with_partials) {
    const Point dH = prob.dH_dp(x, q);
    out.dF_ds = chi_pow_2k * (prob.lambda_eq * inv_chi - dot(dH, chi.grad) * inv_chi2);
    out.dF_dp = {chi_pow_2k * dH[0] * inv_chi, chi_pow_2k * dH[1] * inv_chi};
  }
  return out;
}

double transform_F(const HamiltonianProblem& prob, const CutoffSpec& spec, const Point& x, double s,
                   const Point& p) {
  const CutoffEval chi = cutoff_value_grad(spec, x);
  return transform_F_at(prob, x, chi, std::pow(chi.value, 2.0 * prob.growth_k), prob.g(x), s, p, false).F;
}

FPartials transform_F_partials(const HamiltonianProblem& prob, const CutoffSpec& spec, const Point& x,
                               double s, const Point& p) {
  const CutoffEval chi = cutoff_value_grad(spec, x);
  const TransformedTerms t =
      transform_F_at(prob, x, chi, std::pow(chi.value, 2.0 * prob.growth_k), prob.g(x), s, p, true);
  return {t.dF_ds, t.dF_dp};
}

SubdomainField recover_u(const ScalarField& v_min, const CutoffSpec& spec) {
  const SubdomainNodes nodes = subdomain_nodes(v_min.grid(), spec.subdomain_half_width);
  SubdomainField u = restrict_to(v_min, nodes);
  for (std::size_t k = 0; k < u.values.size(); ++k) {
    u.values[k] /= cutoff_value_grad(spec, nodes.node(k)).value;
  }
  return u;
}

HamiltonianProblem builtin_problem(int test_id, RhsVariant variant) {
  switch (test_id) {
    case 1: return benchmark1();
    case 2: return benchmark2();
    case 3: return benchmark3(variant);
    case 4: return benchmark4();
    case 5: return benchmark5();
    case 6: return benchmark6(variant);
  }
  throw std::invalid_argument("problem.builtin must be in 1..6, got " + std::to_string(test_id));
}

HamiltonianProblem custom_problem(int dim, double lambda_eq, const std::string& hamiltonian,
                                  const std::string& rhs, double growth_k,
                                  const std::optional<std::string>& exact) {
  auto h = std::make_shared<const Expression>(Expression::parse(hamiltonian));
  auto g = std::make_shared<const Expression>(Expression::parse(rhs));
  if (g->uses(Expression::Var::p1) || g->uses(Expression::Var::p2)) {
    throw std::invalid_argument("problem.rhs may only depend on x and y");
  }
  if (dim == 1 && (h->uses(Expression::Var::y) || h->uses(Expression::Var::p2) ||
                   g->uses(Expression::Var::y))) {
    throw std::invalid_argument("one-dimensional problems may not use y or p2");
  }
  HamiltonianProblem p;
  p.name = "custom";
  p.dim = dim;
  p.lambda_eq = lambda_eq;
  p.growth_k = growth_k;
  p.H = [h](const Point& x, const Point& q) { return h->eval(x, q); };
  p.dH_dp = [h](const Point& x, const Point& q) { return h->eval_dp(x, q, kAbsSmoothing).d; };
  p.g = [g](const Point& x) { return g->eval(x); };
  if (exact) {
    auto u = std::make_shared<const Expression>(Expression::parse(*exact));
    if (u->uses(Expression::Var::p1) || u->uses(Expression::Var::p2)) {
      throw std::invalid_argument("problem.exact may only depend on x and y");
    }
    p.u_true = [u](const Point& x) { return u->eval(x); };
    p.u_true_grad = [u, dim](const Point& x) {
      Point d = u->eval_dx(x, {0.0, 0.0}, kAbsSmoothing).d;
      if (dim == 1) d[1] = 0.0;
      return d;
    };
  }
  validate(p);
  return p;
}

}  // namespace hjcvx
