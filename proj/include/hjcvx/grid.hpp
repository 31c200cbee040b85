#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace hjcvx {

inline constexpr int kMaxDim = 2;

/// A point or vector in R^dim. Components beyond the active dimension are
/// kept at zero so that dot products and norms need no dimension argument.
using Point = std::array<double, kMaxDim>;

inline double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm2(const Point& a) { return dot(a, a); }

/// Uniform tensor grid on the box (-R, R)^dim, n nodes per axis.
struct GridSpec {
  int dim = 1;
  int n = 3;
  double half_width = 1.0;
  double h = 1.0;

  std::size_t size() const;
  /// Coordinate of node i (0-based) along any axis; axis(0) = -R, axis(n-1) = +R exactly.
  double axis(int i) const;
  std::array<int, kMaxDim> multi_index(std::size_t idx) const;
  std::size_t flat_index(const std::array<int, kMaxDim>& mi) const;
  Point node(std::size_t idx) const;
  /// Nearest node to a position (clamped to the box).
  std::size_t nearest_index(const Point& x) const;
  bool is_boundary(std::size_t idx) const;
  /// Number of box faces the node lies on (0 interior, 1 face, 2 corner in 2D).
  int face_count(std::size_t idx) const;
  bool is_interior(std::size_t idx) const { return face_count(idx) == 0; }

  bool operator==(const GridSpec&) const = default;
};

GridSpec build_grid(int dim, int n, double half_width);

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const GridSpec& grid, double fill = 0.0);
  ScalarField(const GridSpec& grid, std::vector<double> values);

  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }
  double max_abs() const;

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

/// Per-node gradient; entry k holds the dim components at node k.
using VectorField = std::vector<Point>;

ScalarField eval_on_grid(const GridSpec& grid, const std::function<double(const Point&)>& f);

/// Centered differences inside, one-sided second-order differences on the
/// boundary of each axis.
VectorField gradient_h(const ScalarField& v);

/// Centered first difference along one axis at one node (same stencils as gradient_h).
double partial_h(const ScalarField& v, std::size_t idx, int axis);

/// 3-point / 5-point Laplacian at interior nodes; boundary entries are 0.
ScalarField laplacian_h(const ScalarField& v);

/// The nodes of the grid lying in the closed subbox [-a, a]^dim.
struct SubdomainNodes {
  GridSpec grid;
  int lo = 0;  // first axis index inside, inclusive
  int hi = 0;  // last axis index inside, inclusive

  int count_per_axis() const { return hi - lo + 1; }
  std::size_t size() const;
  /// Flat index into the parent grid of the k-th subdomain node.
  std::size_t parent_index(std::size_t k) const;
  Point node(std::size_t k) const { return grid.node(parent_index(k)); }
};

SubdomainNodes subdomain_nodes(const GridSpec& grid, double half_width);

/// Values on the nodes of a subdomain, in the parent's row-major order.
struct SubdomainField {
  SubdomainNodes nodes;
  std::vector<double> values;
};

SubdomainField restrict_to(const ScalarField& v, const SubdomainNodes& nodes);
SubdomainField eval_on_subdomain(const SubdomainNodes& nodes,
                                 const std::function<double(const Point&)>& f);

/// max |u_comp - u_true| / max |u_true| over the subdomain nodes.
double relative_sup_error(const SubdomainField& u_comp, const SubdomainField& u_true);

/// CSV with header "x[,y],value" and one row per node.
void write_csv(std::ostream& os, const ScalarField& v);
void write_csv(std::ostream& os, const SubdomainField& v);

/// Shortest decimal representation that reads back to the same double.
std::string format_double(double x);

}  // namespace hjcvx
