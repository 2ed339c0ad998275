#include "kspe/truncations.hpp"

#include <cmath>

#include "kspe/errors.hpp"

namespace kspe::trunc {

namespace {
void check_level(double level, bool strictly_positive) {
  if (std::isnan(level) || level < 0.0 || (strictly_positive && level == 0.0))
    throw invalid_input(strictly_positive ? "truncation level must be positive"
                                          : "truncation level must be nonnegative");
}
}  // namespace

double truncate(double s, double level) {
  check_level(level, false);
  if (s > level) return level;
  if (s < -level) return -level;
  return s;
}

double excess(double s, double level) {
  check_level(level, false);
  return s - truncate(s, level);
}

double primitive(double s, double level) {
  check_level(level, false);
  const double a = std::fabs(s);
  if (a <= level) return 0.5 * s * s;
  return level * a - 0.5 * level * level;
}

namespace {
// Hermite bridge q on [0,1] with q(0)=0, q'(0)=1, q(1)=1, q'(1)=0.
inline double bridge(double t) { return ((-t + 1.0) * t + 1.0) * t; }
inline double bridge_prime(double t) { return (-3.0 * t + 2.0) * t + 1.0; }
}  // namespace

double smooth_truncate(double s, double level) {
  check_level(level, true);
  const double a = std::fabs(s);
  const double sign = (s < 0.0) ? -1.0 : 1.0;
  if (a <= 0.5 * level) return s;
  if (a >= level) return sign * level;
  const double t = (a - 0.5 * level) / (0.5 * level);
  return sign * 0.5 * level * (1.0 + bridge(t));
}

double smooth_truncate_prime(double s, double level) {
  check_level(level, true);
  const double a = std::fabs(s);
  if (a <= 0.5 * level) return 1.0;
  if (a >= level) return 0.0;
  const double t = (a - 0.5 * level) / (0.5 * level);
  return bridge_prime(t);
}

}  // namespace kspe::trunc
