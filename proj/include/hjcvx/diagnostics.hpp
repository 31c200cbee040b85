#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "hjcvx/functional.hpp"
#include "hjcvx/optimizer.hpp"
#include "hjcvx/solver.hpp"

namespace hjcvx {

/// Random field with entries of max-norm `amplitude`, built from a few
/// low-frequency sine and cosine modes so that finite-difference operators
/// stay bounded under refinement.
ScalarField random_smooth_field(const GridSpec& grid, double amplitude, std::mt19937_64& rng);

/// Compactly supported bump prod_i (R^2 - x_i^2)^2 times random trigonometric
/// factors; vanishes with its gradient on the box boundary.
struct BumpShape {
  std::vector<double> freq;   // per-axis frequency
  std::vector<double> phase;  // per-axis phase
  double offset = 2.0;        // keeps the trigonometric factor positive
};
BumpShape random_bump_shape(int dim, std::mt19937_64& rng);
ScalarField bump_field(const GridSpec& grid, const BumpShape& shape);

struct GradientCheck {
  double max_rel_discrepancy = 0.0;
  int directions = 0;
};

/// Compares <grad J(v), d> with (J(v + eps d) - J(v - eps d)) / (2 eps) at
/// random smooth v and random directions d.
GradientCheck check_gradient(const ObjectiveWithGradient& objective, const GridSpec& grid, int directions,
                             double eps, std::mt19937_64& rng);

struct ConvexityCheck {
  double min_gap = 0.0;
  double min_symmetrized_gap = 0.0;
  int pairs = 0;
};

/// Bregman gaps over random pairs with max-norm at most `radius`.
ConvexityCheck check_convexity(const CarlemanFunctional& J, int pairs, double radius, std::mt19937_64& rng);

struct CarlemanCheck {
  double min_ratio = 0.0;
  /// Largest |ratio(fine) - ratio(coarse)| / ratio(coarse) over the bumps.
  double max_refinement_change = 0.0;
  int bumps = 0;
  /// Set when the ratio is undefined, e.g. lambda_c = 0.
  std::string error;
};

/// Carleman estimate ratios for random bumps on a coarse and a fine grid.
CarlemanCheck check_carleman(const CarlemanParams& p, int dim, double half_width, int n_coarse, int n_fine,
                             int bumps, std::mt19937_64& rng);

inline constexpr double kGradientTolerance = 1e-5;
inline constexpr double kRefinementTolerance = 0.2;

struct DiagnosticsReport {
  std::uint64_t seed = 0;
  GradientCheck gradient;
  ConvexityCheck convexity;
  CarlemanCheck carleman;

  bool gradient_ok() const { return gradient.max_rel_discrepancy < kGradientTolerance; }
  bool convexity_ok() const { return convexity.min_gap > 0.0; }
  bool carleman_ok() const { return carleman.error.empty() && carleman.min_ratio > 0.0; }
  bool passed() const { return gradient_ok() && convexity_ok() && carleman_ok(); }
};

/// Gradient check (10 directions, eps = 1e-6), convexity probe (100 pairs in
/// the unit max-norm ball) and Carleman ratios (50 bumps, n = 40 and 80)
/// for the problem and parameters of `cfg`.
DiagnosticsReport run_diagnostics(const SolveConfig& cfg, std::uint64_t seed);

nlohmann::json to_json(const DiagnosticsReport& r, const SolveConfig& cfg);

}  // namespace hjcvx
