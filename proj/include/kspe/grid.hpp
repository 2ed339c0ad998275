#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "kspe/errors.hpp"

namespace kspe {

using Point = std::array<double, 3>;

// Uniform tensor grid on the unit box (0,1)^dim with vertex-centered
// unknowns.  Interior nodes sit at x = (i+1)*spacing along each axis for
// i = 0..cells-2; the homogeneous Dirichlet boundary is implicit and never
// stored.  dim == 1 exists for diagnostics and tests; solvers use 2 or 3.
//
// Construction rejects cell counts where spacing*cells != 1 in double
// arithmetic (e.g. 49), so downstream quadrature can rely on the identity.
struct SpaceGrid {
  int dim = 0;
  int cells = 0;     // subdivisions per axis
  double spacing = 0.0;

  static SpaceGrid make(int dim, int cells);

  int nodes_per_axis() const { return cells - 1; }
  std::size_t node_count() const;
  std::size_t face_count(int axis) const;
  double cell_volume() const;  // spacing^dim, the quadrature weight per node

  // Extents padded to three axes (unused axes have extent 1) so loops can
  // always nest the same way regardless of dim.
  std::array<int, 3> node_extents() const;
  // Along `axis` there are `cells` faces per line, boundary faces included.
  std::array<int, 3> face_extents(int axis) const;

  Point node_position(int i0, int i1, int i2) const;

  bool operator==(const SpaceGrid&) const = default;
};

inline std::array<std::size_t, 3> strides_of(const std::array<int, 3>& e) {
  return {static_cast<std::size_t>(e[1]) * e[2], static_cast<std::size_t>(e[2]), 1};
}

// Scalar unknown, one value per interior node, row-major with the last axis
// fastest.  Boundary values are identically zero by convention.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const SpaceGrid& grid, double fill = 0.0);

  template <class F>
  static ScalarField sample(const SpaceGrid& grid, F&& fn) {
    ScalarField out(grid);
    const auto e = grid.node_extents();
    std::size_t idx = 0;
    for (int i0 = 0; i0 < e[0]; ++i0)
      for (int i1 = 0; i1 < e[1]; ++i1)
        for (int i2 = 0; i2 < e[2]; ++i2, ++idx)
          out.v_[idx] = fn(grid.node_position(i0, i1, i2));
    out.require_finite("sampled field");
    return out;
  }

  const SpaceGrid& grid() const { return grid_; }
  std::size_t size() const { return v_.size(); }
  double operator[](std::size_t i) const { return v_[i]; }
  double& operator[](std::size_t i) { return v_[i]; }
  const std::vector<double>& values() const { return v_; }
  std::vector<double>& values() { return v_; }

  void require_finite(const char* label) const;

 private:
  SpaceGrid grid_;
  std::vector<double> v_;
};

// One value per grid face, grouped by axis.  Axis a has `cells` faces along a
// (both boundary faces included) and nodes_per_axis() along the other axes.
class FluxField {
 public:
  FluxField() = default;
  explicit FluxField(const SpaceGrid& grid, double fill = 0.0);

  const SpaceGrid& grid() const { return grid_; }
  std::vector<double>& axis(int a) { return per_axis_[a]; }
  const std::vector<double>& axis(int a) const { return per_axis_[a]; }

  void require_finite(const char* label) const;

 private:
  SpaceGrid grid_;
  std::array<std::vector<double>, 3> per_axis_;
};

// Face-centered difference quotient; boundary nodes read as zero.  Adjoint to
// divergence() below: h^dim * sum_nodes (div F) w == -h^dim * sum_faces F.(grad w)
// holds to roundoff for every interior field w.
FluxField gradient(const ScalarField& v);
ScalarField divergence(const FluxField& f);

// Midpoint quadrature norm (h^dim * sum |v|^p)^(1/p); p may be infinity.
double lp_norm(const ScalarField& v, double p);
// Same quadrature applied component-wise over faces; p = 2 gives the discrete
// Dirichlet seminorm matching the summation-by-parts inner product.
double lp_norm(const FluxField& f, double p);

// h^dim * #{nodes with v >= threshold}.
double level_set_measure(const ScalarField& v, double threshold);

// Plain (unweighted) Euclidean dot product over node values.
double dot(const ScalarField& a, const ScalarField& b);

}  // namespace kspe
