#include "kspe/grid.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace kspe {

SpaceGrid SpaceGrid::make(int dim, int cells) {
  if (dim < 1 || dim > 3)
    throw invalid_input("grid: dim must be 1, 2 or 3, got " + std::to_string(dim));
  if (cells < 4)
    throw invalid_input("grid: cells per axis must be at least 4, got " + std::to_string(cells));
  SpaceGrid g;
  g.dim = dim;
  g.cells = cells;
  g.spacing = 1.0 / cells;
  if (g.spacing * cells != 1.0)
    throw invalid_input("grid: cells=" + std::to_string(cells) +
                        " does not satisfy spacing*cells == 1 in double arithmetic; "
                        "pick a friendlier subdivision count");
  return g;
}

std::size_t SpaceGrid::node_count() const {
  std::size_t n = 1;
  for (int d = 0; d < dim; ++d) n *= static_cast<std::size_t>(nodes_per_axis());
  return n;
}

std::size_t SpaceGrid::face_count(int axis) const {
  const auto e = face_extents(axis);
  return static_cast<std::size_t>(e[0]) * e[1] * e[2];
}

double SpaceGrid::cell_volume() const {
  double w = 1.0;
  for (int d = 0; d < dim; ++d) w *= spacing;
  return w;
}

std::array<int, 3> SpaceGrid::node_extents() const {
  std::array<int, 3> e{1, 1, 1};
  for (int d = 0; d < dim; ++d) e[d] = nodes_per_axis();
  return e;
}

std::array<int, 3> SpaceGrid::face_extents(int axis) const {
  if (axis < 0 || axis >= dim) throw invalid_input("grid: face axis out of range");
  auto e = node_extents();
  e[axis] = cells;
  return e;
}

Point SpaceGrid::node_position(int i0, int i1, int i2) const {
  Point p{0.0, 0.0, 0.0};
  p[0] = (i0 + 1) * spacing;
  if (dim > 1) p[1] = (i1 + 1) * spacing;
  if (dim > 2) p[2] = (i2 + 1) * spacing;
  return p;
}

ScalarField::ScalarField(const SpaceGrid& grid, double fill)
    : grid_(grid), v_(grid.node_count(), fill) {}

void ScalarField::require_finite(const char* label) const {
  for (double x : v_)
    if (!std::isfinite(x))
      throw invariant_violation(std::string(label) + ": non-finite value encountered");
}

FluxField::FluxField(const SpaceGrid& grid, double fill) : grid_(grid) {
  for (int a = 0; a < grid.dim; ++a)
    per_axis_[a].assign(grid.face_count(a), fill);
}

void FluxField::require_finite(const char* label) const {
  for (int a = 0; a < grid_.dim; ++a)
    for (double x : per_axis_[a])
      if (!std::isfinite(x))
        throw invariant_violation(std::string(label) + ": non-finite face value encountered");
}

FluxField gradient(const ScalarField& v) {
  const SpaceGrid& g = v.grid();
  FluxField out(g);
  const auto ne = g.node_extents();
  const auto ns = strides_of(ne);
  const double inv_h = 1.0 / g.spacing;
  for (int a = 0; a < g.dim; ++a) {
    const auto fe = g.face_extents(a);
    auto& fv = out.axis(a);
    std::size_t idx = 0;
    for (int i0 = 0; i0 < fe[0]; ++i0)
      for (int i1 = 0; i1 < fe[1]; ++i1)
        for (int i2 = 0; i2 < fe[2]; ++i2, ++idx) {
          const int ia[3] = {i0, i1, i2};
          // Face j along axis a separates node j-1 from node j; out-of-range
          // node reads are the Dirichlet zero.
          std::size_t base = 0;
          for (int d = 0; d < 3; ++d)
            if (d != a) base += static_cast<std::size_t>(ia[d]) * ns[d];
          const int j = ia[a];
          const double left = (j >= 1) ? v[base + static_cast<std::size_t>(j - 1) * ns[a]] : 0.0;
          const double right = (j <= ne[a] - 1) ? v[base + static_cast<std::size_t>(j) * ns[a]] : 0.0;
          fv[idx] = (right - left) * inv_h;
        }
  }
  return out;
}

ScalarField divergence(const FluxField& f) {
  const SpaceGrid& g = f.grid();
  ScalarField out(g);
  const auto ne = g.node_extents();
  const double inv_h = 1.0 / g.spacing;
  for (int a = 0; a < g.dim; ++a) {
    const auto fe = g.face_extents(a);
    const auto fs = strides_of(fe);
    const auto& fv = f.axis(a);
    std::size_t idx = 0;
    for (int i0 = 0; i0 < ne[0]; ++i0)
      for (int i1 = 0; i1 < ne[1]; ++i1)
        for (int i2 = 0; i2 < ne[2]; ++i2, ++idx) {
          const int ia[3] = {i0, i1, i2};
          std::size_t base = 0;
          for (int d = 0; d < 3; ++d)
            if (d != a) base += static_cast<std::size_t>(ia[d]) * fs[d];
          const double left = fv[base + static_cast<std::size_t>(ia[a]) * fs[a]];
          const double right = fv[base + static_cast<std::size_t>(ia[a] + 1) * fs[a]];
          out[idx] += (right - left) * inv_h;
        }
  }
  return out;
}

namespace {

double accumulate_lp(const std::vector<double>& v, double p, double& max_abs) {
  double sum = 0.0;
  for (double x : v) {
    const double ax = std::fabs(x);
    max_abs = std::max(max_abs, ax);
    if (p == 1.0)
      sum += ax;
    else if (p == 2.0)
      sum += ax * ax;
    else
      sum += std::pow(ax, p);
  }
  return sum;
}

void check_exponent(double p) {
  if (std::isnan(p) || p < 1.0)
    throw invalid_input("lp_norm: exponent must lie in [1, inf]");
}

}  // namespace

double lp_norm(const ScalarField& v, double p) {
  check_exponent(p);
  double max_abs = 0.0;
  const double sum = accumulate_lp(v.values(), std::isinf(p) ? 1.0 : p, max_abs);
  if (std::isinf(p)) return max_abs;
  return std::pow(v.grid().cell_volume() * sum, 1.0 / p);
}

double lp_norm(const FluxField& f, double p) {
  check_exponent(p);
  double max_abs = 0.0;
  double sum = 0.0;
  for (int a = 0; a < f.grid().dim; ++a)
    sum += accumulate_lp(f.axis(a), std::isinf(p) ? 1.0 : p, max_abs);
  if (std::isinf(p)) return max_abs;
  return std::pow(f.grid().cell_volume() * sum, 1.0 / p);
}

double level_set_measure(const ScalarField& v, double threshold) {
  std::size_t count = 0;
  for (double x : v.values())
    if (x >= threshold) ++count;
  return v.grid().cell_volume() * static_cast<double>(count);
}

double dot(const ScalarField& a, const ScalarField& b) {
  if (a.size() != b.size()) throw invalid_input("dot: mismatched fields");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace kspe
