#pragma once

#include <boost/rational.hpp>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kspe/errors.hpp"

namespace kspe::regime {

using Rational = boost::rational<long long>;

std::string to_string(const Rational& r);
Rational parse_rational(const std::string& text);  // "3", "6/5"

// Parabolic Sobolev conjugate (N+2)p/(N+2-p), defined for 1 <= p < N+2.
Rational star(const Rational& p, int dim);
// Two applications of star: (N+2)p/(N+2-2p), defined for 1 <= p < (N+2)/2.
Rational dstar(const Rational& p, int dim);
// The power gamma with N m/(2(N+2-2m)): u^gamma has finite energy exactly
// when the data is this integrable.  Defined for 1 < m < (N+2)/2.
Rational energy_power(const Rational& m, int dim);

enum class Regime { bounded, finite_energy, distributional, entropy, outside_theory };
std::string to_string(Regime);

// L^r(0,T; L^q)-type membership claim; the _infinite flags encode infinite
// exponents and strict marks an open range approached from below (the m = 1
// borderline).
struct SpaceClaim {
  bool r_infinite = false;
  Rational r{1};
  bool q_infinite = false;
  Rational q{1};
  bool with_gradient = false;
  bool strict = false;

  std::string to_text() const;
};

struct RegimeReport {
  int dim = 0;
  Rational m{1};
  Regime regime = Regime::outside_theory;
  std::optional<Rational> m_star;       // omitted when m >= dim+2
  std::optional<Rational> m_dstar;      // omitted when m >= (dim+2)/2
  std::optional<Rational> gamma;        // omitted outside (1, (dim+2)/2)
  std::vector<SpaceClaim> predicted_spaces;
};

// Classifies the data integrability m against the regularity thresholds.
// Interior thresholds belong to the regime above them.  dim == 2 is outside
// the supported theory and is tagged as such (no space claims).
RegimeReport classify(const Rational& m, int dim);

// Root of the geometric-decay recursion: the level d with
// d^gamma = big_m * psi0^(delta-1) * 2^(delta*gamma/(delta-1)), past which a
// set function obeying psi(h) <= big_m psi(k)^delta / (h-k)^gamma vanishes.
double stampacchia_zero(double big_m, double delta, double gamma, double psi0);

struct StampacchiaReport {
  bool hypothesis_holds = false;
  double violating_k = 0.0, violating_h = 0.0;  // first mesh pair that failed
  double d = 0.0;
  double psi_at_d = 0.0;
  bool zero_attained = false;  // psi_at_d <= 1e-12
};

// Scans the decay hypothesis on a uniform (k, h) mesh over [0, h_max], then
// evaluates the sampler at the predicted vanishing level.
StampacchiaReport stampacchia_verify(const std::function<double(double)>& psi,
                                     double big_m, double delta, double gamma,
                                     double h_max, int mesh_points);

}  // namespace kspe::regime
