#include "kspe/coefficients.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace kspe {

std::string to_string(CoefficientFamily f) {
  switch (f) {
    case CoefficientFamily::identity: return "identity";
    case CoefficientFamily::checkerboard_diagonal: return "checkerboard-diagonal";
    case CoefficientFamily::layered_diagonal: return "layered-diagonal";
    case CoefficientFamily::time_modulated_diagonal: return "time-modulated-diagonal";
  }
  return "?";
}

namespace {
void check_dim(int dim) {
  if (dim < 1 || dim > 3) throw invalid_input("coefficient: dim must be 1, 2 or 3");
}
void check_values(double low, double high) {
  if (!(low > 0.0) || !(high > 0.0))
    throw invalid_input("coefficient: cell values must be positive");
}
}  // namespace

CoefficientField CoefficientField::identity(int dim) {
  check_dim(dim);
  CoefficientField c;
  c.family_ = CoefficientFamily::identity;
  c.dim_ = dim;
  c.alpha_ = c.beta_ = 1.0;
  return c;
}

CoefficientField CoefficientField::checkerboard(int dim, double low, double high, double period) {
  check_dim(dim);
  check_values(low, high);
  if (!(period > 0.0)) throw invalid_input("coefficient: period must be positive");
  CoefficientField c;
  c.family_ = CoefficientFamily::checkerboard_diagonal;
  c.dim_ = dim;
  c.low_ = low;
  c.high_ = high;
  c.period_ = period;
  c.alpha_ = std::min(low, high);
  c.beta_ = std::max(low, high);
  return c;
}

CoefficientField CoefficientField::layered(int dim, double low, double high, double period,
                                           int axis) {
  check_dim(dim);
  check_values(low, high);
  if (!(period > 0.0)) throw invalid_input("coefficient: period must be positive");
  if (axis < 0 || axis >= dim) throw invalid_input("coefficient: layer axis out of range");
  CoefficientField c;
  c.family_ = CoefficientFamily::layered_diagonal;
  c.dim_ = dim;
  c.low_ = low;
  c.high_ = high;
  c.period_ = period;
  c.axis_ = axis;
  c.alpha_ = std::min(low, high);
  c.beta_ = std::max(low, high);
  return c;
}

CoefficientField CoefficientField::time_modulated(int dim, double base, double amplitude) {
  check_dim(dim);
  if (!(base > 0.0)) throw invalid_input("coefficient: base must be positive");
  if (std::fabs(amplitude) >= base)
    throw invalid_input("coefficient: |amplitude| must stay below base to keep ellipticity");
  CoefficientField c;
  c.family_ = CoefficientFamily::time_modulated_diagonal;
  c.dim_ = dim;
  c.low_ = base;
  c.high_ = amplitude;
  c.alpha_ = base - std::fabs(amplitude);
  c.beta_ = base + std::fabs(amplitude);
  return c;
}

CoefficientField CoefficientField::with_declared_bounds(double alpha, double beta) const {
  if (!(alpha > 0.0) || !(beta >= alpha))
    throw invalid_input("coefficient: declared bounds need 0 < alpha <= beta");
  CoefficientField c = *this;
  c.alpha_ = alpha;
  c.beta_ = beta;
  return c;
}

double CoefficientField::diagonal_value(const Point& x, double t) const {
  for (int d = 0; d < dim_; ++d)
    if (std::isnan(x[d]) || x[d] < 0.0 || x[d] > 1.0)
      throw domain_error("coefficient sample outside the closed unit box");
  switch (family_) {
    case CoefficientFamily::identity:
      return 1.0;
    case CoefficientFamily::checkerboard_diagonal: {
      // Half-open cells [k p, (k+1) p): a point on the interface takes the
      // value of the cell to its right, a measure-zero convention.
      long parity = 0;
      for (int d = 0; d < dim_; ++d) parity += static_cast<long>(std::floor(x[d] / period_));
      return (parity % 2 == 0) ? low_ : high_;
    }
    case CoefficientFamily::layered_diagonal: {
      const long layer = static_cast<long>(std::floor(x[axis_] / period_));
      return (layer % 2 == 0) ? low_ : high_;
    }
    case CoefficientFamily::time_modulated_diagonal:
      return low_ + high_ * std::sin(2.0 * M_PI * t);
  }
  throw invalid_input("coefficient: unknown family");
}

std::array<std::array<double, 3>, 3> CoefficientField::sample(const Point& x, double t) const {
  std::array<std::array<double, 3>, 3> k{};
  const double v = diagonal_value(x, t);
  for (int d = 0; d < dim_; ++d) k[d][d] = v;
  return k;
}

EllipticityReport verify_ellipticity(const CoefficientField& coeff, int samples,
                                     unsigned long long seed) {
  if (samples < 1) throw invalid_input("verify_ellipticity: need at least one sample");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int dim = coeff.dim();

  EllipticityReport report;
  report.min_rayleigh = std::numeric_limits<double>::infinity();
  report.max_gain = 0.0;
  for (int s = 0; s < samples; ++s) {
    Point x{0, 0, 0};
    for (int d = 0; d < dim; ++d) x[d] = unit(rng);
    const double t = unit(rng);
    Point xi{0, 0, 0};
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (int d = 0; d < dim; ++d) {
        xi[d] = gauss(rng);
        norm2 += xi[d] * xi[d];
      }
    } while (norm2 < 1e-12);
    const auto k = coeff.sample(x, t);
    double quad = 0.0, gain2 = 0.0;
    for (int r = 0; r < dim; ++r) {
      double row = 0.0;
      for (int c = 0; c < dim; ++c) row += k[r][c] * xi[c];
      quad += xi[r] * row;
      gain2 += row * row;
    }
    report.min_rayleigh = std::min(report.min_rayleigh, quad / norm2);
    report.max_gain = std::max(report.max_gain, std::sqrt(gain2 / norm2));
  }
  const double slack = 1e-12;
  report.pass = report.min_rayleigh >= coeff.alpha() - slack &&
                report.max_gain <= coeff.beta() + slack;
  return report;
}

double face_coefficient(const CoefficientField& coeff, const SpaceGrid& grid, int axis,
                        int i0, int i1, int i2, double t) {
  if (coeff.dim() != grid.dim) throw invalid_input("face_coefficient: dim mismatch");
  const auto fe = grid.face_extents(axis);
  const int ia[3] = {i0, i1, i2};
  for (int d = 0; d < 3; ++d)
    if (ia[d] < 0 || ia[d] >= fe[d]) throw invalid_input("face_coefficient: face index out of range");

  Point left{0, 0, 0}, right{0, 0, 0};
  for (int d = 0; d < grid.dim; ++d) {
    const double node = (ia[d] + 1) * grid.spacing;
    left[d] = right[d] = node;
  }
  left[axis] = ia[axis] * grid.spacing;
  right[axis] = (ia[axis] + 1) * grid.spacing;
  const double a = coeff.diagonal_value(left, t);
  const double b = coeff.diagonal_value(right, t);
  return 2.0 * a * b / (a + b);
}

FluxField face_coefficients(const CoefficientField& coeff, const SpaceGrid& grid, double t) {
  if (coeff.dim() != grid.dim) throw invalid_input("face_coefficients: dim mismatch");
  FluxField out(grid);
  for (int a = 0; a < grid.dim; ++a) {
    const auto fe = grid.face_extents(a);
    auto& fv = out.axis(a);
    std::size_t idx = 0;
    for (int i0 = 0; i0 < fe[0]; ++i0)
      for (int i1 = 0; i1 < fe[1]; ++i1)
        for (int i2 = 0; i2 < fe[2]; ++i2, ++idx)
          fv[idx] = face_coefficient(coeff, grid, a, i0, i1, i2, t);
  }
  return out;
}

}  // namespace kspe
