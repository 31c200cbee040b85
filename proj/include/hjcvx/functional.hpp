#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hjcvx/carleman.hpp"
#include "hjcvx/grid.hpp"
#include "hjcvx/problem.hpp"

namespace hjcvx {

struct FunctionalConfig {
  /// Viscosity coefficient in front of -Laplacian.
  double epsilon0 = 1e-3;
  /// Weight of the discrete H^2 regularizer (v^2 + |grad v|^2 + |lap v|^2).
  double eta = 1e-3;
  CarlemanParams carleman;
  /// Factor of the boundary penalty; lambda_c^4 when unset.
  std::optional<double> boundary_weight;

  double effective_boundary_weight() const;
  bool operator==(const FunctionalConfig&) const = default;
};

void validate(const FunctionalConfig& cfg);

struct ObjectiveReport {
  double total = 0.0;
  double residual_term = 0.0;
  double boundary_term = 0.0;
  double regularization_term = 0.0;
};

/// The discrete Carleman-weighted mismatch functional
///
///   J(v) = h^d     sum_interior w |-eps0 lap_h v + F(x, v, grad_h v)|^2
///        + h^(d-1) B sum_faces sum_face-nodes w (v^2 + |grad_h v|^2)
///        + eta h^d sum_interior (v^2 + |grad_h v|^2 + |lap_h v|^2)
///
/// on a fixed grid. Every boundary node contributes once per box face it lies
/// on, so 2D corners are counted twice. Node data (cutoff, weights, g) are
/// precomputed at construction; evaluation is const and re-entrant.
class CarlemanFunctional {
 public:
  CarlemanFunctional(const GridSpec& grid, HamiltonianProblem problem, CutoffSpec cutoff,
                     FunctionalConfig config);

  const GridSpec& grid() const { return grid_; }
  const HamiltonianProblem& problem() const { return problem_; }
  const CutoffSpec& cutoff() const { return cutoff_; }
  const FunctionalConfig& config() const { return config_; }
  const ScalarField& weights() const { return weights_; }

  ObjectiveReport evaluate(const ScalarField& v) const;
  double value(std::span<const double> v) const;
  /// Exact gradient of value() with respect to every nodal value.
  ScalarField gradient(const ScalarField& v) const;
  /// Returns J(v) and writes dJ/dv into `grad`.
  double value_and_gradient(std::span<const double> v, std::span<double> grad) const;
  /// -eps0 lap_h v + F(x, v, grad_h v) at interior nodes, 0 elsewhere.
  ScalarField residual(const ScalarField& v) const;

 private:
  struct NodeData {
    Point x;
    CutoffEval chi;
    double chi_pow_2k;
    double g;
    int faces;
  };

  ObjectiveReport run(std::span<const double> v, std::span<double> grad) const;

  GridSpec grid_;
  HamiltonianProblem problem_;
  CutoffSpec cutoff_;
  FunctionalConfig config_;
  ScalarField weights_;
  std::vector<NodeData> nodes_;
};

ScalarField residual_field(const ScalarField& v, const HamiltonianProblem& prob, const CutoffSpec& spec,
                           const FunctionalConfig& cfg);
ObjectiveReport evaluate_J(const ScalarField& v, const HamiltonianProblem& prob, const CutoffSpec& spec,
                           const FunctionalConfig& cfg);
ScalarField gradient_J(const ScalarField& v, const HamiltonianProblem& prob, const CutoffSpec& spec,
                       const FunctionalConfig& cfg);

/// Bregman gap J(v1) - J(v2) - <grad J(v2), v1 - v2>.
double convexity_probe(const CarlemanFunctional& J, const ScalarField& v1, const ScalarField& v2);
double convexity_probe(const ScalarField& v1, const ScalarField& v2, const HamiltonianProblem& prob,
                       const CutoffSpec& spec, const FunctionalConfig& cfg);

}  // namespace hjcvx
