#pragma once

#include <utility>
#include <vector>

#include "kspe/stepper.hpp"

namespace kspe {

// L^r in time of the spatial L^q norm (of the field or of its face gradient).
// Infinite exponents mean the max over stamps.
struct BochnerSpec {
  double time_exponent = 2.0;
  double space_exponent = 2.0;
  bool with_gradient = false;
};

enum class TrajectoryField { density, potential };

// Left-endpoint time quadrature: finite r sums dt * phi(t_j)^r over the left
// stamp of every step; r = infinity takes the max over all stamps.
double bochner_norm(const Trajectory& traj, const BochnerSpec& spec,
                    TrajectoryField field = TrajectoryField::density);

// Space-time integral ratio of the parabolic interpolation inequality:
// integral of |u|^(2(N+2)/N) over the cylinder divided by
// sup_t |u|_2^(4/N) times the space-time Dirichlet energy.  Zero trajectory
// gives zero; invariant under u -> lambda u.
double gn_ratio(const Trajectory& traj);

// Defect of the level-k entropy inequality against zero test function at stamp
// `time_index`:
//   int Theta_k(u(t)) + intint A grad u . grad T_k(u)
//   - intint (upwinded u M grad psi) . grad T_k(u) - intint f T_k(u).
// Space-time sums use the implicit (right-endpoint) pairing the stepper
// satisfies, so for k past the range of u this telescopes to the backward
// Euler energy identity up to solver tolerances and is nonpositive up to
// those tolerances.  The drift carries the raw density (no clamp): with the
// truncation inactive this matches the scheme exactly, otherwise it is the
// diagnostic the continuous inequality asks for.
double entropy_residual(const Trajectory& traj, double level, std::size_t time_index);

struct EntropyTerms {
  double state = 0.0;      // int Theta_k(u(t))
  double diffusion = 0.0;  // intint A grad u . grad T_k(u)
  double drift = 0.0;      // intint (u M grad psi) . grad T_k(u), upwinded
  double source = 0.0;     // intint f T_k(u)
  double residual() const { return state + diffusion - drift - source; }
  double scale() const;    // 1 + sum of magnitudes, the tolerance reference
};

EntropyTerms entropy_terms(const Trajectory& traj, double level, std::size_t time_index);

struct RefinementSeries {
  double exponent;                                // candidate p
  std::vector<std::pair<double, double>> points;  // (h, norm value)
};

// Largest candidate p whose log-norm growth against log(1/h) stays at or
// below slope_tol; 0 when every candidate grows.  Each series needs at least
// three refinement levels.
double empirical_exponent(const std::vector<RefinementSeries>& series,
                          double slope_tol = 0.05);

}  // namespace kspe
