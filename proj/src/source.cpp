#include "kspe/source.hpp"

#include <cmath>

namespace kspe {

std::string to_string(SourceKind k) {
  switch (k) {
    case SourceKind::constant: return "constant";
    case SourceKind::separable: return "separable";
    case SourceKind::spatial_singularity: return "spatial-singularity";
  }
  return "?";
}

double SourceSpec::singularity_exponent(int dim) const {
  return (static_cast<double>(dim) / target_m()) * (1.0 - margin);
}

void SourceSpec::validate(int dim) const {
  switch (kind) {
    case SourceKind::constant:
      if (!(value >= 0.0)) throw invalid_input("source: constant value must be nonnegative");
      return;
    case SourceKind::separable:
      if (!(amplitude >= 0.0)) throw invalid_input("source: amplitude must be nonnegative");
      if (!(decay >= 0.0)) throw invalid_input("source: decay must be nonnegative");
      return;
    case SourceKind::spatial_singularity: {
      if (m_den <= 0 || m_num <= 0) throw invalid_input("source: malformed integrability target");
      if (m_num < m_den) throw invalid_input("source: integrability target m must be >= 1");
      if (!(margin > 0.0) || !(margin < 1.0))
        throw invalid_input("source: margin must lie in (0, 1)");
      for (int d = 0; d < dim; ++d)
        if (!(center[d] > 0.0) || !(center[d] < 1.0))
          throw invalid_input("source: singularity center must be strictly interior");
      return;
    }
  }
  throw invalid_input("source: unknown kind");
}

void SourceSpec::validate_on_grid(const SpaceGrid& grid) const {
  validate(grid.dim);
  if (kind != SourceKind::spatial_singularity) return;
  for (int d = 0; d < grid.dim; ++d) {
    const double scaled = center[d] * grid.cells;
    if (std::fabs(scaled - std::round(scaled)) * grid.spacing < 1e-9)
      throw invalid_input("source: singularity center lies on a grid node");
  }
}

ScalarField generate_source(const SourceSpec& spec, const SpaceGrid& grid, double t) {
  spec.validate_on_grid(grid);
  switch (spec.kind) {
    case SourceKind::constant:
      return ScalarField(grid, spec.value);
    case SourceKind::separable: {
      const double time_part = spec.amplitude * std::exp(-spec.decay * t);
      return ScalarField::sample(grid, [&](const Point& x) {
        double s = time_part;
        for (int d = 0; d < grid.dim; ++d) s *= std::sin(M_PI * x[d]);
        return std::fabs(s);
      });
    }
    case SourceKind::spatial_singularity: {
      const double a = spec.singularity_exponent(grid.dim);
      return ScalarField::sample(grid, [&](const Point& x) {
        double r2 = 0.0;
        for (int d = 0; d < grid.dim; ++d) {
          const double dx = x[d] - spec.center[d];
          r2 += dx * dx;
        }
        return std::pow(r2, -0.5 * a);
      });
    }
  }
  throw invalid_input("source: unknown kind");
}

}  // namespace kspe
