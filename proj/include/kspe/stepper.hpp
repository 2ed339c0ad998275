#pragma once

#include <vector>

#include "kspe/coefficients.hpp"
#include "kspe/elliptic.hpp"
#include "kspe/grid.hpp"
#include "kspe/source.hpp"

namespace kspe {

// Everything one solver run needs.  `diff` is the parabolic coefficient
// A(x,t), `drift` the elliptic/advective coefficient M(x); `trunc_level` is
// the level n of the truncated system: the drift density, the source and the
// elliptic data all pass through the clamp at n.
struct ProblemConfig {
  SpaceGrid grid;
  double theta = 0.5;        // elliptic coupling exponent, in (0, 2/dim)
  double trunc_level = 64.0; // >= 1
  double dt = 1e-3;
  double t_final = 0.05;
  CoefficientField diff = CoefficientField::identity(3);
  CoefficientField drift = CoefficientField::identity(3);
  SourceSpec source;
  double fp_tol = 1e-10;
  int fp_max_iter = 50;
  double lin_tol = 1e-10;
  int lin_max_iter = 0;

  void validate() const;
};

struct StepStats {
  int fixed_point_iterations = 0;
  double fixed_point_gap = 0.0;    // last contraction gap, L2
  int elliptic_iterations = 0;     // accumulated over the loop
  int parabolic_iterations = 0;
  double clip_depth = 0.0;         // deepest negative zeroed by the guards
};

struct StepResult {
  ScalarField u;
  ScalarField psi;
  StepStats stats;
};

// Upwind advective face flux: m_face * (dpsi/daxis at the face) * clamped
// density taken from the node the flow leaves.  Boundary faces read the
// Dirichlet zero on their outer side, so inflow carries nothing and outflow
// is nonnegative for nonnegative densities; that sign structure is what makes
// the discrete mass inequality exact.
FluxField drift_flux(const ScalarField& density, const ScalarField& potential,
                     const FluxField& drift_face_coeff, double trunc_level);
FluxField drift_flux(const ScalarField& density, const ScalarField& potential,
                     const CoefficientField& drift, double trunc_level);

// One backward-Euler step from u_prev at time t_next - dt_step to t_next.
// Inner loop: freeze the density w, solve the elliptic problem driven by
// clamp(w)^theta, take one implicit diffusion step with the frozen upwinded
// drift and clamped source, repeat until the density stops moving in L2.
// Throws step_failure when the loop does not contract within fp_max_iter.
StepResult schauder_step(const ProblemConfig& config, const ScalarField& u_prev,
                         double t_next, double dt_step);

struct Trajectory {
  ProblemConfig config;
  std::vector<double> times;        // times[0] == 0, zero initial data
  std::vector<ScalarField> u;
  std::vector<ScalarField> psi;
  std::vector<StepStats> step_stats;  // one per step

  std::size_t steps() const { return step_stats.size(); }
  double step_weight(std::size_t j) const { return times[j + 1] - times[j]; }
};

// Integrates from zero initial data to t_final in ceil(t_final/dt) steps
// (the last step shrinks to land exactly on t_final when dt does not divide
// it).  Propagates step_failure from the fixed-point loop.
Trajectory run(const ProblemConfig& config);

}  // namespace kspe
