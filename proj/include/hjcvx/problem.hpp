#pragma once

#include <functional>
#include <optional>
#include <string>

#include "hjcvx/grid.hpp"

namespace hjcvx {

using ScalarFn = std::function<double(const Point&)>;
using VectorFn = std::function<Point(const Point&)>;
using HamiltonianFn = std::function<double(const Point& x, const Point& p)>;
using HamiltonianGradFn = std::function<Point(const Point& x, const Point& p)>;

/// Smoothing radius used when differentiating |t| inside Hamiltonians.
inline constexpr double kAbsSmoothing = 1e-8;

/// lambda_eq * u + H(x, grad u) = g(x) on R^dim.
struct HamiltonianProblem {
  std::string name;
  int dim = 1;
  double lambda_eq = 1.0;
  HamiltonianFn H;
  /// Gradient of H in p; may be a smoothed derivative where H has kinks.
  HamiltonianGradFn dH_dp;
  ScalarFn g;
  /// Exponent k in |H(x, p)| <= C |p|^k.
  double growth_k = 1.0;
  std::optional<ScalarFn> u_true;
  std::optional<VectorFn> u_true_grad;
};

/// Throws std::invalid_argument when a structural invariant fails.
void validate(const HamiltonianProblem& prob);

/// The Gaussian cutoff chi(x) = exp(-|x|^2 / 2) and the subdomain G = (-a, a)^dim.
struct CutoffSpec {
  double subdomain_half_width = 0.8;
  /// Value of chi on the boundary of the computational box, exp(-R^2 / 2).
  double delta = 0.0;
  /// Minimum of chi over the grid nodes in the closed subdomain.
  double c = 0.0;
};

CutoffSpec make_cutoff(const GridSpec& grid, double subdomain_half_width);

struct CutoffEval {
  double value;
  Point grad;
};

CutoffEval cutoff_value_grad(const CutoffSpec& spec, const Point& x);

/// F(x, s, p) = chi^{2k} [ lambda_eq s / chi + H(x, (chi p - s grad chi) / chi^2) - g(x) ],
/// the equation satisfied by v = chi u.
double transform_F(const HamiltonianProblem& prob, const CutoffSpec& spec, const Point& x, double s,
                   const Point& p);

struct FPartials {
  double dF_ds;
  Point dF_dp;
};

FPartials transform_F_partials(const HamiltonianProblem& prob, const CutoffSpec& spec, const Point& x,
                               double s, const Point& p);

/// Node-level evaluation of F and its partials with cutoff data and g(x)
/// supplied by the caller; used by the functional's inner loops.
struct TransformedTerms {
  double F;
  double dF_ds;
  Point dF_dp;
};

TransformedTerms transform_F_at(const HamiltonianProblem& prob, const Point& x, const CutoffEval& chi,
                                double chi_pow_2k, double g_x, double s, const Point& p,
                                bool with_partials);

/// u = v_min / chi on the closed subdomain nodes.
SubdomainField recover_u(const ScalarField& v_min, const CutoffSpec& spec);

/// How the right-hand sides of the benchmarks with kinks are built.
///
/// `consistent` derives g from the exact solution u*, so that u* satisfies the
/// equation pointwise wherever it is differentiable. `as_printed` reproduces
/// the published formulas literally; for benchmarks 3 and 6 those differ from
/// the consistent ones (sin x in place of cos x in benchmark 3, a factor 2x in
/// place of x in benchmark 6).
enum class RhsVariant { consistent, as_printed };

/// Benchmarks 1-3 are one-dimensional, 4-6 two-dimensional.
HamiltonianProblem builtin_problem(int test_id, RhsVariant variant = RhsVariant::consistent);

inline constexpr int kBuiltinCount = 6;

/// Custom problem from expression strings. `hamiltonian` may use x, y, p1, p2;
/// `rhs` and `exact` may use x and y.
HamiltonianProblem custom_problem(int dim, double lambda_eq, const std::string& hamiltonian,
                                  const std::string& rhs, double growth_k,
                                  const std::optional<std::string>& exact);

}  // namespace hjcvx
