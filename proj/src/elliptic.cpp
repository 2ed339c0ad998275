#include "kspe/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kspe {

void EllipticProblem::validate() const {
  if (grid.node_count() == 0) throw invalid_input("elliptic: empty grid");
  if (coeff.dim() != grid.dim) throw invalid_input("elliptic: coefficient dim mismatch");
  if (coeff.time_dependent())
    throw invalid_input("elliptic: coefficient must be time-independent");
  if (rhs.grid() != grid) throw invalid_input("elliptic: right side lives on another grid");
  if (!(rel_tol > 0.0) || rel_tol >= 1.0)
    throw invalid_input("elliptic: tolerance must lie in (0, 1)");
}

EllipticSolution solve_elliptic(const EllipticProblem& problem) {
  problem.validate();
  problem.rhs.require_finite("elliptic right side");

  DiffusionOperator op(problem.grid, problem.coeff, 0.0, 0.0);
  EllipticSolution out;
  out.psi = ScalarField(problem.grid);
  out.stats = pcg_solve(op, problem.rhs, out.psi, problem.rel_tol, problem.max_iterations);
  if (!out.stats.converged)
    throw iteration_limit("elliptic solve did not reach tolerance", out.stats.residual,
                          out.stats.iterations);
  out.psi.require_finite("elliptic solution");

  const bool nonneg_data =
      std::all_of(problem.rhs.values().begin(), problem.rhs.values().end(),
                  [](double g) { return g >= 0.0; });
  if (nonneg_data) {
    double psi_max = 0.0;
    for (double v : out.psi.values()) psi_max = std::max(psi_max, std::fabs(v));
    const double guard = 1e-12 * std::max(1.0, psi_max);
    for (double& v : out.psi.values()) {
      if (v < -guard)
        throw invariant_violation("elliptic solve broke the maximum principle beyond roundoff");
      if (v < 0.0) v = 0.0;
    }
  }
  return out;
}

PsiBoundsReport psi_bounds_report(const ScalarField& psi, const ScalarField& rhs,
                                  double f_l1, double theta) {
  if (f_l1 < 0.0) throw invalid_input("psi_bounds_report: negative L1 size");
  PsiBoundsReport r;
  r.psi_max = lp_norm(psi, std::numeric_limits<double>::infinity());
  r.grad_l2 = lp_norm(gradient(psi), 2.0);
  r.source_l1 = lp_norm(rhs, 1.0);
  r.fuel = std::pow(f_l1, theta);
  if (r.fuel > 0.0) {
    r.ratio_max = r.psi_max / r.fuel;
    r.ratio_grad = r.grad_l2 / r.fuel;
  }
  return r;
}

}  // namespace kspe
