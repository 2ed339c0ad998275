#pragma once

#include "kspe/coefficients.hpp"
#include "kspe/grid.hpp"
#include "kspe/linsolve.hpp"

namespace kspe {

struct EllipticProblem {
  SpaceGrid grid;
  CoefficientField coeff;  // time-independent diagonal field
  ScalarField rhs;
  double rel_tol = 1e-10;
  int max_iterations = 0;  // 0 picks a size-based cap

  void validate() const;
};

struct EllipticSolution {
  ScalarField psi;
  SolveStats stats;
};

// Solves -div(coeff grad psi) = rhs with zero Dirichlet data.  When rhs >= 0
// the M-matrix inverse guarantees psi >= 0; iterative roundoff dips below
// zero by at most ~1e-12 of the solution scale are zeroed, anything worse
// aborts as an invariant violation.  Throws iteration_limit on
// non-convergence.
EllipticSolution solve_elliptic(const EllipticProblem& problem);

struct PsiBoundsReport {
  double psi_max = 0.0;     // sup-norm over nodes
  double grad_l2 = 0.0;     // face-quadrature Dirichlet seminorm
  double source_l1 = 0.0;   // L1 of the elliptic right side
  double fuel = 0.0;        // reference scale: f_l1^theta
  double ratio_max = 0.0;   // psi_max / fuel
  double ratio_grad = 0.0;  // grad_l2 / fuel
};

// Ratios of the solution norms against the L1 size of the driving source;
// the truncation sweeps check these stay level as the truncation grows.
PsiBoundsReport psi_bounds_report(const ScalarField& psi, const ScalarField& rhs,
                                  double f_l1, double theta);

}  // namespace kspe
