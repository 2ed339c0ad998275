#include "kspe/stepper.hpp"

#include <cmath>
#include <string>

#include "kspe/truncations.hpp"

namespace kspe {

void ProblemConfig::validate() const {
  if (grid.dim < 2)
    throw invalid_input("problem: solver grids need dim 2 or 3");
  if (!(theta > 0.0) || !(theta < 2.0 / grid.dim))
    throw invalid_input("problem: theta must lie in (0, 2/dim)");
  if (!(trunc_level >= 1.0)) throw invalid_input("problem: truncation level must be >= 1");
  if (!(dt > 0.0)) throw invalid_input("problem: dt must be positive");
  if (!(t_final > 0.0)) throw invalid_input("problem: t_final must be positive");
  if (diff.dim() != grid.dim || drift.dim() != grid.dim)
    throw invalid_input("problem: coefficient dim mismatch");
  if (drift.time_dependent())
    throw invalid_input("problem: the drift coefficient must be time-independent");
  if (!(fp_tol > 0.0) || fp_max_iter < 1)
    throw invalid_input("problem: bad fixed-point controls");
  if (!(lin_tol > 0.0)) throw invalid_input("problem: bad linear tolerance");
  source.validate_on_grid(grid);
}

FluxField drift_flux(const ScalarField& density, const ScalarField& potential,
                     const FluxField& drift_face_coeff, double trunc_level) {
  const SpaceGrid& g = density.grid();
  FluxField out(g);
  const FluxField grad_psi = gradient(potential);
  const auto ne = g.node_extents();
  const auto ns = strides_of(ne);
  for (int a = 0; a < g.dim; ++a) {
    const auto fe = g.face_extents(a);
    const auto& mv = drift_face_coeff.axis(a);
    const auto& gv = grad_psi.axis(a);
    auto& fv = out.axis(a);
    std::size_t idx = 0;
    for (int i0 = 0; i0 < fe[0]; ++i0)
      for (int i1 = 0; i1 < fe[1]; ++i1)
        for (int i2 = 0; i2 < fe[2]; ++i2, ++idx) {
          const double velocity = mv[idx] * gv[idx];
          const int ia[3] = {i0, i1, i2};
          std::size_t base = 0;
          for (int d = 0; d < 3; ++d)
            if (d != a) base += static_cast<std::size_t>(ia[d]) * ns[d];
          const int j = ia[a];
          // Positive velocity points along +axis and carries the left node;
          // negative velocity carries the right node.  Out-of-range nodes are
          // the boundary and carry zero.
          double carried = 0.0;
          if (velocity > 0.0 && j >= 1)
            carried = density[base + static_cast<std::size_t>(j - 1) * ns[a]];
          else if (velocity < 0.0 && j <= ne[a] - 1)
            carried = density[base + static_cast<std::size_t>(j) * ns[a]];
          fv[idx] = velocity * trunc::truncate(carried, trunc_level);
        }
  }
  return out;
}

FluxField drift_flux(const ScalarField& density, const ScalarField& potential,
                     const CoefficientField& drift, double trunc_level) {
  return drift_flux(density, potential,
                    face_coefficients(drift, density.grid(), 0.0), trunc_level);
}

namespace {

// Zero out solver-roundoff dips below zero; anything deeper than the guard is
// a genuine loss of the scheme's cone invariance and aborts loudly.
double enforce_nonnegative(ScalarField& v, const char* label) {
  double vmax = 0.0;
  for (double x : v.values()) vmax = std::max(vmax, std::fabs(x));
  const double guard = 1e-12 * std::max(1.0, vmax);
  double depth = 0.0;
  for (double& x : v.values()) {
    if (x < -guard)
      throw invariant_violation(std::string(label) +
                                ": negative values beyond roundoff; reduce dt");
    if (x < 0.0) {
      depth = std::max(depth, -x);
      x = 0.0;
    }
  }
  return depth;
}

}  // namespace

StepResult schauder_step(const ProblemConfig& config, const ScalarField& u_prev,
                         double t_next, double dt_step) {
  config.validate();
  if (!(dt_step > 0.0)) throw invalid_input("step: dt must be positive");
  if (u_prev.grid() != config.grid) throw invalid_input("step: state lives on another grid");

  const SpaceGrid& g = config.grid;
  const double n = config.trunc_level;

  // Clamped source at the end of the interval, the implicit sampling point.
  ScalarField f_clamped = generate_source(config.source, g, t_next);
  for (double& x : f_clamped.values()) x = trunc::truncate(x, n);

  const FluxField drift_faces = face_coefficients(config.drift, g, 0.0);
  const DiffusionOperator parabolic_op(g, config.diff, t_next, 1.0 / dt_step);

  StepResult out;
  StepStats& stats = out.stats;
  ScalarField w = u_prev;
  ScalarField v = u_prev;  // warm start for the linear solves
  ScalarField rhs(g);

  for (int iter = 1; iter <= config.fp_max_iter; ++iter) {
    // (a) elliptic potential driven by clamp(w)^theta.
    EllipticProblem ep{g, config.drift, ScalarField(g), config.lin_tol, config.lin_max_iter};
    for (std::size_t i = 0; i < w.size(); ++i) {
      double s = trunc::truncate(w[i], n);
      if (s < 0.0) {
        // The state is kept nonnegative by the cone guard; only roundoff can
        // land here.
        if (s < -1e-12)
          throw invariant_violation("step: density went negative before the power law");
        stats.clip_depth = std::max(stats.clip_depth, -s);
        s = 0.0;
      }
      ep.rhs[i] = std::pow(s, config.theta);
    }
    EllipticSolution es = solve_elliptic(ep);
    stats.elliptic_iterations += es.stats.iterations;

    // (b) implicit diffusion step with the frozen upwinded drift.
    const FluxField flux = drift_flux(w, es.psi, drift_faces, n);
    const ScalarField div_flux = divergence(flux);
    for (std::size_t i = 0; i < rhs.size(); ++i)
      rhs[i] = u_prev[i] / dt_step - div_flux[i] + f_clamped[i];
    SolveStats ps = pcg_solve(parabolic_op, rhs, v, config.lin_tol, config.lin_max_iter);
    if (!ps.converged)
      throw iteration_limit("parabolic solve did not reach tolerance", ps.residual,
                            ps.iterations);
    stats.parabolic_iterations += ps.iterations;
    const double depth = enforce_nonnegative(v, "step");
    stats.clip_depth = std::max(stats.clip_depth, depth);

    // (c) contraction test on the density iterates.
    double gap2 = 0.0, wnorm2 = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double d = v[i] - w[i];
      gap2 += d * d;
      wnorm2 += w[i] * w[i];
    }
    const double vol = g.cell_volume();
    const double gap = std::sqrt(vol * gap2);
    const double wnorm = std::sqrt(vol * wnorm2);
    stats.fixed_point_iterations = iter;
    stats.fixed_point_gap = gap;
    if (gap <= config.fp_tol * std::max(1.0, wnorm)) {
      out.u = v;
      out.psi = std::move(es.psi);
      return out;
    }
    w = v;
  }
  throw step_failure("fixed-point loop did not contract within the iteration cap", -1,
                     stats.fixed_point_gap);
}

Trajectory run(const ProblemConfig& config) {
  config.validate();

  const double ratio = config.t_final / config.dt;
  long steps = std::llround(ratio);
  if (steps < 1 || std::fabs(ratio - static_cast<double>(steps)) > 1e-9)
    steps = static_cast<long>(std::ceil(ratio - 1e-12));
  steps = std::max<long>(steps, 1);

  Trajectory traj;
  traj.config = config;
  traj.times.reserve(steps + 1);
  traj.u.reserve(steps + 1);
  traj.psi.reserve(steps + 1);
  traj.step_stats.reserve(steps);

  traj.times.push_back(0.0);
  traj.u.emplace_back(config.grid);
  traj.psi.emplace_back(config.grid);

  for (long j = 1; j <= steps; ++j) {
    const double t = (j == steps) ? config.t_final
                                  : std::min(config.t_final, j * config.dt);
    const double dt_step = t - traj.times.back();
    try {
      StepResult r = schauder_step(config, traj.u.back(), t, dt_step);
      traj.times.push_back(t);
      traj.u.push_back(std::move(r.u));
      traj.psi.push_back(std::move(r.psi));
      traj.step_stats.push_back(r.stats);
    } catch (const step_failure& e) {
      throw step_failure(std::string(e.what()) + " at step " + std::to_string(j),
                         static_cast<int>(j), e.gap);
    }
  }
  return traj;
}

}  // namespace kspe
