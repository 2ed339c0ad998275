#pragma once

#include <array>
#include <string>

#include "kspe/grid.hpp"

namespace kspe {

enum class SourceKind { constant, separable, spatial_singularity };

std::string to_string(SourceKind);

// Nonnegative forcing term f(x, t).  The singular kind realizes
// f = |x - center|^(-a) with a = (dim/m)(1 - margin), which lies in L^m with
// room to spare (a*m = dim*(1-margin) < dim) and misses membership above
// m/(1-margin).  `m` is kept as an exact fraction so regime classification
// can reuse it without rounding.
struct SourceSpec {
  SourceKind kind = SourceKind::constant;

  // constant
  double value = 1.0;

  // separable: amplitude * prod_d sin(pi x_d) * exp(-decay * t)
  double amplitude = 1.0;
  double decay = 0.0;

  // spatial_singularity
  long long m_num = 2, m_den = 1;  // target integrability exponent m >= 1
  double margin = 0.1;             // epsilon in (0, 1)
  std::array<double, 3> center{0.5 + 0.1 / 1.4142135623730951,
                               0.5 - 0.1 / 1.7320508075688772,
                               0.5 + 0.1 / 2.23606797749979};

  double target_m() const { return static_cast<double>(m_num) / static_cast<double>(m_den); }
  double singularity_exponent(int dim) const;  // the power a above

  // Throws invalid_input on out-of-range parameters; grid-independent part.
  void validate(int dim) const;
  // Additionally rejects centers that collide with a node of `grid`.
  void validate_on_grid(const SpaceGrid& grid) const;
};

ScalarField generate_source(const SourceSpec& spec, const SpaceGrid& grid, double t);

}  // namespace kspe
