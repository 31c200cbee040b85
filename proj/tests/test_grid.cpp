#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <sstream>

#include "doctest.h"
#include "hjcvx/grid.hpp"

using namespace hjcvx;
using doctest::Approx;

namespace {

ScalarField random_field(const GridSpec& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  ScalarField f(g);
  for (double& e : f.values()) e = U(rng);
  return f;
}

double max_interior_error(const ScalarField& approx, const std::function<double(const Point&)>& exact) {
  double err = 0.0;
  const GridSpec& g = approx.grid();
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g.is_interior(k)) err = std::max(err, std::abs(approx[k] - exact(g.node(k))));
  }
  return err;
}

}  // namespace

TEST_CASE("build_grid spacing and node coordinates") {
  SUBCASE("70 nodes on (-2, 2)^2") {
    const GridSpec g = build_grid(2, 70, 2.0);
    CHECK(g.h == 4.0 / 69.0);
    CHECK(g.h == Approx(0.05797).epsilon(1e-4));
    CHECK(g.size() == 4900u);
  }
  SUBCASE("smallest legal grid") {
    const GridSpec g = build_grid(1, 3, 1.0);
    CHECK(g.h == 1.0);
    CHECK(g.axis(0) == -1.0);
    CHECK(g.axis(1) == 0.0);
    CHECK(g.axis(2) == 1.0);
  }
  SUBCASE("corner of a 5x5 grid") {
    const GridSpec g = build_grid(2, 5, 2.0);
    CHECK(g.size() == 25u);
    const Point c = g.node(0);
    CHECK(c[0] == -2.0);
    CHECK(c[1] == -2.0);
  }
  SUBCASE("axis matches -R + i h") {
    for (int n : {3, 7, 70, 101}) {
      const GridSpec g = build_grid(1, n, 2.5);
      CHECK(g.h == 2.0 * 2.5 / (n - 1));
      CHECK(g.axis(0) == -2.5);
      CHECK(g.axis(n - 1) == 2.5);
      for (int i = 0; i < n; ++i) CHECK(g.axis(i) == Approx(-2.5 + i * g.h).epsilon(1e-14));
    }
  }
}

TEST_CASE("build_grid rejects bad input") {
  CHECK_THROWS_WITH_AS(build_grid(3, 10, 1.0), doctest::Contains("grid.dim"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(build_grid(1, 2, 1.0), doctest::Contains("grid.n must be ≥ 3"), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(1, 10, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(1, 10, -1.0), std::invalid_argument);
}

TEST_CASE("node enumeration round-trips") {
  for (int dim : {1, 2}) {
    const GridSpec g = build_grid(dim, 17, 1.3);
    for (std::size_t k = 0; k < g.size(); ++k) {
      CHECK(g.nearest_index(g.node(k)) == k);
      CHECK(g.flat_index(g.multi_index(k)) == k);
    }
  }
}

TEST_CASE("row-major storage, last axis fastest") {
  const GridSpec g = build_grid(2, 4, 1.0);
  CHECK(g.flat_index({1, 2}) == 1u * 4u + 2u);
  CHECK(g.node(1)[0] == -1.0);
  CHECK(g.node(1)[1] == Approx(-1.0 + 2.0 / 3.0));
}

TEST_CASE("boundary classification") {
  const GridSpec g = build_grid(2, 4, 1.0);
  int corners = 0, faces = 0, interior = 0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    switch (g.face_count(k)) {
      case 0: ++interior; CHECK_FALSE(g.is_boundary(k)); break;
      case 1: ++faces; CHECK(g.is_boundary(k)); break;
      case 2: ++corners; CHECK(g.is_boundary(k)); break;
    }
  }
  CHECK(corners == 4);
  CHECK(faces == 8);
  CHECK(interior == 4);
}

TEST_CASE("eval_on_grid") {
  const GridSpec g1 = build_grid(1, 3, 1.0);
  const ScalarField zero = eval_on_grid(g1, [](const Point&) { return 0.0; });
  for (double e : zero.values()) CHECK(e == 0.0);
  const ScalarField lin = eval_on_grid(g1, [](const Point& x) { return x[0]; });
  CHECK(lin.values() == std::vector<double>{-1.0, 0.0, 1.0});

  const GridSpec g2 = build_grid(2, 3, 1.0);
  const ScalarField xy = eval_on_grid(g2, [](const Point& x) { return x[0] * x[1]; });
  // Direct evaluation on {-1,0,1}^2, row-major.
  const std::vector<double> expected{1, 0, -1, 0, 0, 0, -1, 0, 1};
  CHECK(xy.values() == expected);

  CHECK_THROWS_WITH_AS(eval_on_grid(g1, [](const Point& x) { return 1.0 / x[0]; }), doctest::Contains("node"),
                       std::domain_error);
  CHECK_THROWS_AS(eval_on_grid(g1, [](const Point&) { return std::nan(""); }), std::domain_error);
}

TEST_CASE("gradient_h") {
  SUBCASE("constant") {
    const GridSpec g = build_grid(2, 6, 1.0);
    const VectorField d = gradient_h(ScalarField(g, 3.7));
    for (const Point& p : d) {
      CHECK(std::abs(p[1]) < 1e-12);
      CHECK(std::abs(p[0]) < 1e-12);
    }
  }
  SUBCASE("linear is exact, boundary included") {
    const GridSpec g = build_grid(1, 9, 2.0);
    const VectorField d = gradient_h(eval_on_grid(g, [](const Point& x) { return x[0]; }));
    for (const Point& p : d) CHECK(p[0] == Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("x^2 on {-1,0,1}") {
    const GridSpec g = build_grid(1, 3, 1.0);
    const VectorField d = gradient_h(eval_on_grid(g, [](const Point& x) { return x[0] * x[0]; }));
    // (-3*1 + 4*0 - 1)/2 = -2; centered (1 - 1)/2 = 0; (3*1 - 4*0 + 1)/2 = 2.
    CHECK(d[0][0] == -2.0);
    CHECK(d[1][0] == 0.0);
    CHECK(d[2][0] == 2.0);
  }
  SUBCASE("affine in 2D") {
    const GridSpec g = build_grid(2, 7, 1.5);
    const VectorField d = gradient_h(eval_on_grid(g, [](const Point& x) { return 0.3 - 2.0 * x[0] + 5.0 * x[1]; }));
    for (const Point& p : d) {
      CHECK(p[0] == Approx(-2.0).epsilon(1e-12));
      CHECK(p[1] == Approx(5.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("laplacian_h") {
  SUBCASE("constant") {
    const GridSpec g = build_grid(2, 6, 1.0);
    const ScalarField l = laplacian_h(ScalarField(g, -2.0));
    for (double e : l.values()) CHECK(std::abs(e) < 1e-12);
  }
  SUBCASE("x^2 + y^2 gives 4, boundary stored as 0") {
    const GridSpec g = build_grid(2, 11, 2.0);
    const ScalarField l = laplacian_h(eval_on_grid(g, [](const Point& x) { return norm2(x); }));
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (g.is_interior(k)) {
        CHECK(l[k] == Approx(4.0).epsilon(1e-12));
      } else {
        CHECK(l[k] == 0.0);
      }
    }
  }
  SUBCASE("x^4 at 0 with h = 0.5") {
    const GridSpec g = build_grid(1, 5, 1.0);
    REQUIRE(g.h == 0.5);
    const ScalarField l = laplacian_h(eval_on_grid(g, [](const Point& x) { return std::pow(x[0], 4); }));
    CHECK(l[2] == Approx(0.5).epsilon(1e-15));
  }
}

TEST_CASE("difference operators are linear") {
  std::mt19937_64 rng(7);
  for (int dim : {1, 2}) {
    const GridSpec g = build_grid(dim, 9, 1.0);
    const ScalarField u = random_field(g, rng);
    const ScalarField v = random_field(g, rng);
    const double a = 1.7, b = -0.4;
    ScalarField w(g);
    for (std::size_t k = 0; k < g.size(); ++k) w[k] = a * u[k] + b * v[k];
    const VectorField gu = gradient_h(u), gv = gradient_h(v), gw = gradient_h(w);
    const ScalarField lu = laplacian_h(u), lv = laplacian_h(v), lw = laplacian_h(w);
    for (std::size_t k = 0; k < g.size(); ++k) {
      for (int ax = 0; ax < dim; ++ax) CHECK(gw[k][ax] == Approx(a * gu[k][ax] + b * gv[k][ax]).epsilon(1e-12));
      CHECK(lw[k] == Approx(a * lu[k] + b * lv[k]).epsilon(1e-12).scale(1.0 / (g.h * g.h)));
    }
  }
}

TEST_CASE("second-order convergence under halving") {
  using std::numbers::pi;
  const auto f = [](const Point& x) { return std::sin(pi * x[0]); };
  const auto df = [](const Point& x) { return pi * std::cos(pi * x[0]); };
  const auto d2f = [](const Point& x) { return -pi * pi * std::sin(pi * x[0]); };
  double prev_grad = 0.0, prev_lap = 0.0;
  for (int level = 0; level < 4; ++level) {
    const int n = 10 * (1 << level) + 1;
    const GridSpec g = build_grid(1, n, 1.0);
    const ScalarField v = eval_on_grid(g, f);
    const VectorField d = gradient_h(v);
    double eg = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) eg = std::max(eg, std::abs(d[k][0] - df(g.node(k))));
    const double el = max_interior_error(laplacian_h(v), d2f);
    if (level > 0) {
      CHECK(prev_grad / eg >= 3.5);
      CHECK(prev_lap / el >= 3.5);
    }
    prev_grad = eg;
    prev_lap = el;
  }
}

TEST_CASE("subdomain nodes and restriction") {
  const GridSpec g = build_grid(1, 70, 2.0);
  const SubdomainNodes G = subdomain_nodes(g, 0.8);
  for (std::size_t k = 0; k < G.size(); ++k) CHECK(std::abs(G.node(k)[0]) <= 0.8);
  // Neighbours just outside the subdomain.
  CHECK(std::abs(g.axis(G.lo - 1)) > 0.8);
  CHECK(std::abs(g.axis(G.hi + 1)) > 0.8);
  CHECK_THROWS_AS(subdomain_nodes(g, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(subdomain_nodes(g, 0.0), std::invalid_argument);

  const GridSpec g2 = build_grid(2, 20, 2.0);
  const SubdomainNodes G2 = subdomain_nodes(g2, 0.8);
  CHECK(G2.size() == static_cast<std::size_t>(G2.count_per_axis() * G2.count_per_axis()));
  const ScalarField v = eval_on_grid(g2, [](const Point& x) { return x[0] - 3 * x[1]; });
  const SubdomainField r = restrict_to(v, G2);
  for (std::size_t k = 0; k < G2.size(); ++k) CHECK(r.values[k] == v[G2.parent_index(k)]);
}

TEST_CASE("relative_sup_error") {
  const GridSpec g = build_grid(2, 9, 1.0);
  const SubdomainNodes G = subdomain_nodes(g, 0.5);
  const SubdomainField two = eval_on_subdomain(G, [](const Point&) { return 2.0; });
  const SubdomainField shifted = eval_on_subdomain(G, [](const Point&) { return 2.1; });
  CHECK(relative_sup_error(two, two) == 0.0);
  CHECK(relative_sup_error(shifted, two) == Approx(0.05).epsilon(1e-12));
  const SubdomainField zero = eval_on_subdomain(G, [](const Point&) { return 0.0; });
  CHECK_THROWS_AS(relative_sup_error(two, zero), std::invalid_argument);
}

TEST_CASE("CSV output") {
  const GridSpec g = build_grid(2, 3, 1.0);
  const ScalarField v = eval_on_grid(g, [](const Point& x) { return x[0] + 0.1; });
  std::ostringstream os;
  write_csv(os, v);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,y,value");
  std::getline(in, line);
  CHECK(line == "-1,-1,-0.9");
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 9);

  CHECK(format_double(0.1) == "0.1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}
