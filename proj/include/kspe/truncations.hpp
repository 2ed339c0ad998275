#pragma once

namespace kspe::trunc {

// Clamp to [-level, level].  level >= 0.
double truncate(double s, double level);

// Part of s beyond the clamp: s - truncate(s, level).
double excess(double s, double level);

// Primitive of the clamp that vanishes at zero:
// s^2/2 inside the band, level*|s| - level^2/2 outside.
double primitive(double s, double level);

// C^1 plateau variant used where a bounded derivative matters: identity on
// [0, level/2], constant `level` beyond `level`, cubic Hermite blend in
// between, extended oddly to s < 0.  Derivative stays within [0, 4/3] and is
// supported in [-level, level].  level > 0.
double smooth_truncate(double s, double level);
double smooth_truncate_prime(double s, double level);

}  // namespace kspe::trunc
