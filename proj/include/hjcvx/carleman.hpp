#pragma once

#include "hjcvx/grid.hpp"

namespace hjcvx {

/// Parameters of the weight exp(2 lambda_c |x - x0|^(-beta)).
struct CarlemanParams {
  Point x0{9.0, 0.0};
  double beta = 20.0;
  double lambda_c = 3.0;

  bool operator==(const CarlemanParams&) const = default;
};

/// Largest admissible exponent 2 lambda_c r^(-beta); exp() overflows past ~709.
inline constexpr double kMaxWeightExponent = 700.0;

/// Checks beta >= 1, lambda_c >= 0 and that x0 lies outside the closed box.
void validate(const CarlemanParams& p, const GridSpec& grid);

/// 2 lambda_c |x - x0|^(-beta), evaluated in log space.
double carleman_log_weight(const CarlemanParams& p, const Point& x);
double carleman_weight(const CarlemanParams& p, const Point& x);

/// Nodal weights; rejects configurations whose exponent exceeds kMaxWeightExponent.
ScalarField weight_field(const CarlemanParams& p, const GridSpec& grid);

/// Empirical constant of the integral Carleman estimate with A = Id:
///
///   sum w |lap_h u|^2  /  sum w (lambda_c^3 u^2 + lambda_c |grad_h u|^2)
///
/// over interior nodes. u must vanish together with its gradient on the
/// boundary. Values are checked to 1e-12 of max|u|; the one-sided boundary
/// gradient may additionally deviate from zero by its truncation error,
/// bounded by h^2 times the largest third difference of u along that axis.
double carleman_estimate_ratio(const CarlemanParams& p, const ScalarField& u);

}  // namespace hjcvx
