#pragma once

#include <array>
#include <string>

#include "kspe/grid.hpp"

namespace kspe {

enum class CoefficientFamily {
  identity,
  checkerboard_diagonal,
  layered_diagonal,
  time_modulated_diagonal,
};

std::string to_string(CoefficientFamily);

// Diagonal coefficient on the closed unit box, possibly time-dependent.  All
// supported families are scalar multiples of the identity, so a single number
// describes the matrix at a point.  Declared ellipticity bounds travel with
// the field; verify_ellipticity() checks them against random samples, which
// catches misdeclared bounds.
class CoefficientField {
 public:
  static CoefficientField identity(int dim);
  static CoefficientField checkerboard(int dim, double low, double high, double period = 0.25);
  static CoefficientField layered(int dim, double low, double high, double period = 0.25,
                                  int axis = 0);
  static CoefficientField time_modulated(int dim, double base, double amplitude);

  // Same field with explicitly declared bounds (possibly wrong on purpose,
  // for verification tests).
  CoefficientField with_declared_bounds(double alpha, double beta) const;

  int dim() const { return dim_; }
  CoefficientFamily family() const { return family_; }
  bool time_dependent() const { return family_ == CoefficientFamily::time_modulated_diagonal; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double period() const { return period_; }
  double low() const { return low_; }
  double high() const { return high_; }
  int layer_axis() const { return axis_; }

  // Scalar diagonal value at (x, t); throws domain_error outside the closed box.
  double diagonal_value(const Point& x, double t) const;

  // Full dim x dim matrix (diagonal by construction).
  std::array<std::array<double, 3>, 3> sample(const Point& x, double t) const;

 private:
  CoefficientField() = default;

  CoefficientFamily family_ = CoefficientFamily::identity;
  int dim_ = 0;
  double low_ = 1.0, high_ = 1.0;  // cell values, or (base, amplitude) when modulated
  double period_ = 0.25;
  int axis_ = 0;
  double alpha_ = 1.0, beta_ = 1.0;
};

struct EllipticityReport {
  bool pass = false;
  double min_rayleigh = 0.0;
  double max_gain = 0.0;
};

// Samples random (x, t, direction) triples and checks the declared bounds:
// xi.K xi >= alpha |xi|^2 and |K xi| <= beta |xi|.
EllipticityReport verify_ellipticity(const CoefficientField& coeff, int samples,
                                     unsigned long long seed = 0x5eedULL);

// Harmonic mean of the diagonal entry sampled on the two sides of the face
// (boundary-adjacent faces sample the boundary trace).  Keeps the assembled
// operator an M-matrix for any positive diagonal field.
double face_coefficient(const CoefficientField& coeff, const SpaceGrid& grid, int axis,
                        int i0, int i1, int i2, double t);

// All faces at once; the assembly path of the solvers.
FluxField face_coefficients(const CoefficientField& coeff, const SpaceGrid& grid, double t);

}  // namespace kspe
