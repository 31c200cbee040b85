#include "hjcvx/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hjcvx {

namespace {

std::size_t stride(const GridSpec& g, int axis) {
  std::size_t s = 1;
  for (int a = axis + 1; a < g.dim; ++a) s *= static_cast<std::size_t>(g.n);
  return s;
}

std::string describe(const Point& x, int dim) {
  std::ostringstream os;
  os << '(' << format_double(x[0]);
  if (dim > 1) os << ", " << format_double(x[1]);
  os << ')';
  return os.str();
}

}  // namespace

std::size_t GridSpec::size() const {
  std::size_t s = 1;
  for (int a = 0; a < dim; ++a) s *= static_cast<std::size_t>(n);
  return s;
}

double GridSpec::axis(int i) const {
  // Symmetric form: axis(n-1-i) == -axis(i) bit for bit.
  return half_width * static_cast<double>(2 * i - (n - 1)) / static_cast<double>(n - 1);
}

std::array<int, kMaxDim> GridSpec::multi_index(std::size_t idx) const {
  std::array<int, kMaxDim> mi{0, 0};
  for (int a = dim - 1; a >= 0; --a) {
    mi[a] = static_cast<int>(idx % static_cast<std::size_t>(n));
    idx /= static_cast<std::size_t>(n);
  }
  return mi;
}

std::size_t GridSpec::flat_index(const std::array<int, kMaxDim>& mi) const {
  std::size_t idx = 0;
  for (int a = 0; a < dim; ++a) idx = idx * static_cast<std::size_t>(n) + static_cast<std::size_t>(mi[a]);
  return idx;
}

Point GridSpec::node(std::size_t idx) const {
  const auto mi = multi_index(idx);
  Point x{0.0, 0.0};
  for (int a = 0; a < dim; ++a) x[a] = axis(mi[a]);
  return x;
}

std::size_t GridSpec::nearest_index(const Point& x) const {
  std::array<int, kMaxDim> mi{0, 0};
  for (int a = 0; a < dim; ++a) {
    const long i = std::lround((x[a] + half_width) / h);
    mi[a] = static_cast<int>(std::clamp<long>(i, 0, n - 1));
  }
  return flat_index(mi);
}

int GridSpec::face_count(std::size_t idx) const {
  const auto mi = multi_index(idx);
  int faces = 0;
  for (int a = 0; a < dim; ++a) {
    if (mi[a] == 0 || mi[a] == n - 1) ++faces;
  }
  return faces;
}

bool GridSpec::is_boundary(std::size_t idx) const { return face_count(idx) > 0; }

GridSpec build_grid(int dim, int n, double half_width) {
  if (dim < 1 || dim > kMaxDim) {
    throw std::invalid_argument("grid.dim must be 1 or 2, got " + std::to_string(dim));
  }
  if (n < 3) {
    throw std::invalid_argument("grid.n must be ≥ 3, got " + std::to_string(n));
  }
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw std::invalid_argument("grid.half_width must be a finite positive number");
  }
  GridSpec g;
  g.dim = dim;
  g.n = n;
  g.half_width = half_width;
  g.h = 2.0 * half_width / static_cast<double>(n - 1);
  return g;
}

ScalarField::ScalarField(const GridSpec& grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

ScalarField::ScalarField(const GridSpec& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("field size " + std::to_string(values_.size()) +
                                " does not match grid size " + std::to_string(grid_.size()));
  }
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double x : values_) m = std::max(m, std::abs(x));
  return m;
}

ScalarField eval_on_grid(const GridSpec& grid, const std::function<double(const Point&)>& f) {
  ScalarField out(grid);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const Point x = grid.node(k);
    const double value = f(x);
    if (!std::isfinite(value)) {
      throw std::domain_error("non-finite function value at node " + std::to_string(k) + " " +
                              describe(x, grid.dim));
    }
    out[k] = value;
  }
  return out;
}

double partial_h(const ScalarField& v, std::size_t idx, int axis) {
  const GridSpec& g = v.grid();
  const std::size_t s = stride(g, axis);
  const int i = g.multi_index(idx)[axis];
  const double inv2h = 1.0 / (2.0 * g.h);
  if (i == 0) return (-3.0 * v[idx] + 4.0 * v[idx + s] - v[idx + 2 * s]) * inv2h;
  if (i == g.n - 1) return (3.0 * v[idx] - 4.0 * v[idx - s] + v[idx - 2 * s]) * inv2h;
  return (v[idx + s] - v[idx - s]) * inv2h;
}

VectorField gradient_h(const ScalarField& v) {
  const GridSpec& g = v.grid();
  VectorField grad(v.size(), Point{0.0, 0.0});
  for (std::size_t k = 0; k < v.size(); ++k) {
    for (int a = 0; a < g.dim; ++a) grad[k][a] = partial_h(v, k, a);
  }
  return grad;
}

ScalarField laplacian_h(const ScalarField& v) {
  const GridSpec& g = v.grid();
  ScalarField out(g);
  const double inv_h2 = 1.0 / (g.h * g.h);
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!g.is_interior(k)) continue;
    double acc = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      const std::size_t s = stride(g, a);
      acc += v[k + s] - 2.0 * v[k] + v[k - s];
    }
    out[k] = acc * inv_h2;
  }
  return out;
}

std::size_t SubdomainNodes::size() const {
  std::size_t s = 1;
  for (int a = 0; a < grid.dim; ++a) s *= static_cast<std::size_t>(count_per_axis());
  return s;
}

std::size_t SubdomainNodes::parent_index(std::size_t k) const {
  const auto m = static_cast<std::size_t>(count_per_axis());
  std::array<int, kMaxDim> mi{0, 0};
  for (int a = grid.dim - 1; a >= 0; --a) {
    mi[a] = lo + static_cast<int>(k % m);
    k /= m;
  }
  return grid.flat_index(mi);
}

SubdomainNodes subdomain_nodes(const GridSpec& grid, double half_width) {
  if (!(half_width > 0.0) || !(half_width < grid.half_width)) {
    throw std::invalid_argument("cutoff.subdomain_half_width must lie in (0, grid.half_width)");
  }
  constexpr double kSlack = 1e-12;
  SubdomainNodes s;
  s.grid = grid;
  s.lo = 0;
  while (grid.axis(s.lo) < -half_width - kSlack) ++s.lo;
  s.hi = grid.n - 1;
  while (grid.axis(s.hi) > half_width + kSlack) --s.hi;
  if (s.hi < s.lo) throw std::invalid_argument("subdomain contains no grid nodes");
  return s;
}

SubdomainField restrict_to(const ScalarField& v, const SubdomainNodes& nodes) {
  SubdomainField out{nodes, std::vector<double>(nodes.size())};
  for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] = v[nodes.parent_index(k)];
  return out;
}

SubdomainField eval_on_subdomain(const SubdomainNodes& nodes,
                                 const std::function<double(const Point&)>& f) {
  SubdomainField out{nodes, std::vector<double>(nodes.size())};
  for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] = f(nodes.node(k));
  return out;
}

double relative_sup_error(const SubdomainField& u_comp, const SubdomainField& u_true) {
  if (u_comp.values.size() != u_true.values.size()) {
    throw std::invalid_argument("relative_sup_error: fields live on different node sets");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < u_true.values.size(); ++k) {
    num = std::max(num, std::abs(u_comp.values[k] - u_true.values[k]));
    den = std::max(den, std::abs(u_true.values[k]));
  }
  if (den == 0.0) throw std::invalid_argument("relative_sup_error: reference field is identically zero");
  return num / den;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

void write_header(std::ostream& os, int dim) {
  os << (dim == 1 ? "x" : "x,y");
}

void write_coords(std::ostream& os, const Point& x, int dim) {
  os << format_double(x[0]);
  if (dim > 1) os << ',' << format_double(x[1]);
}

}  // namespace

void write_csv(std::ostream& os, const ScalarField& v) {
  write_header(os, v.grid().dim);
  os << ",value\n";
  for (std::size_t k = 0; k < v.size(); ++k) {
    write_coords(os, v.grid().node(k), v.grid().dim);
    os << ',' << format_double(v[k]) << '\n';
  }
}

void write_csv(std::ostream& os, const SubdomainField& v) {
  write_header(os, v.nodes.grid.dim);
  os << ",value\n";
  for (std::size_t k = 0; k < v.values.size(); ++k) {
    write_coords(os, v.nodes.node(k), v.nodes.grid.dim);
    os << ',' << format_double(v.values[k]) << '\n';
  }
}

}  // namespace hjcvx
