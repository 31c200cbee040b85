#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "hjcvx/carleman.hpp"
#include "hjcvx/diagnostics.hpp"

using namespace hjcvx;
using doctest::Approx;

namespace {

CarlemanParams params(Point x0, double beta, double lambda_c) {
  CarlemanParams p;
  p.x0 = x0;
  p.beta = beta;
  p.lambda_c = lambda_c;
  return p;
}

}  // namespace

TEST_CASE("weight values") {
  const CarlemanParams standard;
  CHECK(standard.x0 == Point{9.0, 0.0});
  CHECK(standard.beta == 20.0);
  CHECK(standard.lambda_c == 3.0);

  CHECK(carleman_weight(params({9, 0}, 20, 0.0), {1.0, 0.3}) == 1.0);
  // r = 8: exponent 6 * 8^-20 ~ 5.2e-18, below double resolution at 1.
  CHECK(carleman_log_weight(standard, {1.0, 0.0}) == Approx(6.0 * std::pow(8.0, -20.0)).epsilon(1e-14));
  CHECK(carleman_log_weight(standard, {1.0, 0.0}) == Approx(5.2e-18).epsilon(0.01));
  CHECK(carleman_weight(standard, {1.0, 0.0}) >= 1.0);
  CHECK(carleman_weight(standard, {-2.0, 0.0}) <= carleman_weight(standard, {2.0, 0.0}));
  CHECK(carleman_log_weight(standard, {-2.0, 0.0}) < carleman_log_weight(standard, {2.0, 0.0}));

  const CarlemanParams strong = params({1.5, 0.0}, 2.0, 1.0);
  CHECK(carleman_weight(strong, {1.0, 0.0}) == Approx(std::exp(2.0 * 4.0)));
  CHECK_THROWS_AS(carleman_weight(strong, {1.5, 0.0}), std::invalid_argument);
}

TEST_CASE("weight decreases along rays from x0") {
  const CarlemanParams p = params({2.5, 0.5}, 3.0, 2.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    Point dir{U(rng), U(rng)};
    const double len = std::sqrt(norm2(dir));
    double prev = std::numeric_limits<double>::infinity();
    for (double r = 0.6; r < 6.0; r += 0.3) {
      const double w = carleman_weight(p, {p.x0[0] + r * dir[0] / len, p.x0[1] + r * dir[1] / len});
      CHECK(w >= 1.0);
      CHECK(w < prev);
      prev = w;
    }
  }
}

TEST_CASE("weight field") {
  const GridSpec g2 = build_grid(2, 30, 2.0);
  const ScalarField ones = weight_field(params({9, 0}, 20, 0.0), g2);
  for (double w : ones.values()) CHECK(w == 1.0);

  SUBCASE("maximum at the node nearest x0") {
    const CarlemanParams p = params({2.6, 0.7}, 4.0, 1.0);
    const ScalarField w = weight_field(p, g2);
    std::size_t arg = 0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (w[k] > w[arg]) arg = k;
    }
    CHECK(arg == g2.nearest_index(p.x0));
    for (double e : w.values()) {
      CHECK(e >= 1.0);
      CHECK(std::isfinite(e));
    }
  }
  SUBCASE("standard parameters are flat to round-off") {
    for (int dim : {1, 2}) {
      const ScalarField w = weight_field(CarlemanParams{}, build_grid(dim, 70, 2.0));
      double lo = w[0], hi = w[0];
      for (double e : w.values()) {
        lo = std::min(lo, e);
        hi = std::max(hi, e);
      }
      CHECK(hi / lo <= 1.0 + 1e-15);
    }
    // Log-space spread in 1D: 6 (7^-20 - 11^-20) ~ 7.5e-18.
    const CarlemanParams p{};
    const double spread = carleman_log_weight(p, {2.0, 0.0}) - carleman_log_weight(p, {-2.0, 0.0});
    CHECK(spread == Approx(6.0 * (std::pow(7.0, -20.0) - std::pow(11.0, -20.0))).epsilon(1e-12));
    CHECK(spread == Approx(7.5e-18).epsilon(0.02));
  }
  SUBCASE("bit-for-bit reproducible") {
    const CarlemanParams p = params({2.6, 0.7}, 4.0, 1.0);
    CHECK(weight_field(p, g2).values() == weight_field(p, g2).values());
  }
  SUBCASE("overflow is rejected with the node named") {
    const CarlemanParams p = params({2.01, 0.0}, 20.0, 3.0);
    CHECK_THROWS_WITH_AS(weight_field(p, g2), doctest::Contains("node"), std::overflow_error);
  }
}

TEST_CASE("parameter validation") {
  const GridSpec g = build_grid(2, 10, 2.0);
  CHECK_NOTHROW(validate(CarlemanParams{}, g));
  CHECK_THROWS_WITH_AS(validate(params({1.0, 0.0}, 20, 3), g), doctest::Contains("carleman.x0"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(validate(params({2.0, 0.0}, 20, 3), g), doctest::Contains("carleman.x0"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(validate(params({9.0, 0.0}, 0.5, 3), g), doctest::Contains("carleman.beta"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(validate(params({9.0, 0.0}, 20, -1), g), doctest::Contains("carleman.lambda"),
                       std::invalid_argument);
}

TEST_CASE("estimate ratio on a 1D bump") {
  const CarlemanParams p = params({2.0, 0.0}, 1.0, 1.0);
  const GridSpec g = build_grid(1, 41, 1.0);
  const ScalarField u = eval_on_grid(g, [](const Point& x) { return std::pow(1.0 - x[0] * x[0], 2); });
  // Direct summation over interior nodes.
  double num = 0.0, den = 0.0;
  for (int i = 1; i + 1 < g.n; ++i) {
    const double x = g.axis(i);
    const double w = std::exp(2.0 / std::abs(x - 2.0));
    const double lap = (u[i + 1] - 2 * u[i] + u[i - 1]) / (g.h * g.h);
    const double grad = (u[i + 1] - u[i - 1]) / (2 * g.h);
    num += w * lap * lap;
    den += w * (u[i] * u[i] + grad * grad);
  }
  const double ratio = carleman_estimate_ratio(p, u);
  CHECK(ratio > 0.0);
  CHECK(ratio == Approx(num / den).epsilon(1e-12));

  ScalarField scaled = u;
  for (double& e : scaled.values()) e *= -3.7;
  CHECK(carleman_estimate_ratio(p, scaled) == Approx(ratio).epsilon(1e-13));
  ScalarField plus_zero = u;
  for (double& e : plus_zero.values()) e += 0.0;
  CHECK(carleman_estimate_ratio(p, plus_zero) == ratio);
}

TEST_CASE("estimate ratio rejects invalid input") {
  const CarlemanParams p = params({2.0, 0.0}, 1.0, 1.0);
  const GridSpec g = build_grid(1, 41, 1.0);
  CHECK_THROWS_AS(carleman_estimate_ratio(p, ScalarField(g)), std::invalid_argument);
  const ScalarField not_zero_on_boundary = eval_on_grid(g, [](const Point& x) { return 1.0 - 0.5 * x[0] * x[0]; });
  CHECK_THROWS_AS(carleman_estimate_ratio(p, not_zero_on_boundary), std::invalid_argument);
  // Vanishes on the boundary but has a slope there.
  const ScalarField kinked = eval_on_grid(g, [](const Point& x) { return 1.0 - x[0] * x[0]; });
  CHECK_THROWS_AS(carleman_estimate_ratio(p, kinked), std::invalid_argument);
}

TEST_CASE("estimate ratio on random bumps, stable under refinement") {
  std::mt19937_64 rng(2024);
  for (int dim : {1, 2}) {
    CAPTURE(dim);
    const CarlemanCheck c = check_carleman(CarlemanParams{}, dim, 2.0, 40, 80, 50, rng);
    CHECK(c.bumps == 50);
    CHECK(c.min_ratio > 0.0);
    CHECK(c.max_refinement_change < kRefinementTolerance);
  }
}
