#include "hjcvx/carleman.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "hjcvx/summation.hpp"

namespace hjcvx {

namespace {

double distance_to_box(const Point& x0, const GridSpec& grid) {
  double d2 = 0.0;
  for (int a = 0; a < grid.dim; ++a) {
    const double excess = std::abs(x0[a]) - grid.half_width;
    if (excess > 0.0) d2 += excess * excess;
  }
  return std::sqrt(d2);
}

std::string point_text(const Point& x, int dim) {
  std::string s = "(" + format_double(x[0]);
  if (dim > 1) s += ", " + format_double(x[1]);
  return s + ")";
}

// Largest forward third difference along `axis` over the whole grid.
double max_third_difference(const ScalarField& u, int axis) {
  const GridSpec& g = u.grid();
  double m = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    auto mi = g.multi_index(k);
    if (mi[axis] + 3 >= g.n) continue;
    double v[4];
    for (int j = 0; j < 4; ++j) {
      v[j] = u[g.flat_index(mi)];
      ++mi[axis];
    }
    m = std::max(m, std::abs(v[3] - 3.0 * v[2] + 3.0 * v[1] - v[0]));
  }
  return m / (g.h * g.h * g.h);
}

}  // namespace

void validate(const CarlemanParams& p, const GridSpec& grid) {
  if (!(p.beta >= 1.0)) throw std::invalid_argument("carleman.beta must be ≥ 1");
  if (!(p.lambda_c >= 0.0)) throw std::invalid_argument("carleman.lambda must be ≥ 0");
  if (!(distance_to_box(p.x0, grid) > 0.0)) {
    throw std::invalid_argument("carleman.x0 " + point_text(p.x0, grid.dim) +
                                " must lie outside the closed box [-R, R]^d");
  }
}

double carleman_log_weight(const CarlemanParams& p, const Point& x) {
  const Point d{x[0] - p.x0[0], x[1] - p.x0[1]};
  const double r = std::sqrt(norm2(d));
  if (r == 0.0) throw std::invalid_argument("Carleman weight evaluated at x0");
  if (p.lambda_c == 0.0) return 0.0;
  return 2.0 * p.lambda_c * std::exp(-p.beta * std::log(r));
}

double carleman_weight(const CarlemanParams& p, const Point& x) { return std::exp(carleman_log_weight(p, x)); }

ScalarField weight_field(const CarlemanParams& p, const GridSpec& grid) {
  validate(p, grid);
  ScalarField w(grid);
  for (std::size_t k = 0; k < w.size(); ++k) {
    const Point x = grid.node(k);
    const double e = carleman_log_weight(p, x);
    if (!(e <= kMaxWeightExponent)) {
      throw std::overflow_error("Carleman weight exponent " + format_double(e) + " exceeds " +
                                format_double(kMaxWeightExponent) + " at node " +
                                point_text(x, grid.dim));
    }
    w[k] = std::exp(e);
  }
  return w;
}

double carleman_estimate_ratio(const CarlemanParams& p, const ScalarField& u) {
  const GridSpec& g = u.grid();
  const ScalarField w = weight_field(p, g);
  const double scale = u.max_abs();
  if (scale == 0.0) throw std::invalid_argument("carleman_estimate_ratio: u is identically zero");

  // A one-sided gradient whose exact value is 0 still carries an O(h^2 u''')
  // truncation error; that much is tolerated on top of round-off.
  constexpr double kTol = 1e-12;
  std::array<double, kMaxDim> third{0.0, 0.0};
  if (g.n >= 4) {
    for (int a = 0; a < g.dim; ++a) third[a] = max_third_difference(u, a);
  }
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (!g.is_boundary(k)) continue;
    if (std::abs(u[k]) > kTol * scale) {
      throw std::invalid_argument("carleman_estimate_ratio: u does not vanish at boundary node " +
                                  point_text(g.node(k), g.dim));
    }
    const auto mi = g.multi_index(k);
    for (int a = 0; a < g.dim; ++a) {
      const bool normal = mi[a] == 0 || mi[a] == g.n - 1;
      const double allowed = kTol * scale / g.h + (normal ? g.h * g.h * third[a] : 0.0);
      if (std::abs(partial_h(u, k, a)) > allowed) {
        throw std::invalid_argument("carleman_estimate_ratio: gradient of u does not vanish at boundary node " +
                                    point_text(g.node(k), g.dim));
      }
    }
  }

  const ScalarField lap = laplacian_h(u);
  const double l = p.lambda_c;
  CompensatedSum num;
  CompensatedSum den;
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (!g.is_interior(k)) continue;
    Point grad{0.0, 0.0};
    for (int a = 0; a < g.dim; ++a) grad[a] = partial_h(u, k, a);
    num += w[k] * lap[k] * lap[k];
    den += w[k] * (l * l * l * u[k] * u[k] + l * norm2(grad));
  }
  // Both sums carry the same cell volume h^d, which cancels.
  if (!(den.value() > 0.0)) {
    throw std::invalid_argument("carleman_estimate_ratio: denominator vanishes (lambda_c = 0 or u = 0 inside)");
  }
  return num.value() / den.value();
}

}  // namespace hjcvx
