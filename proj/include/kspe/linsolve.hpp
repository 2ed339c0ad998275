#pragma once

#include "kspe/coefficients.hpp"
#include "kspe/grid.hpp"

namespace kspe {

// Discrete L = shift*I - div(K grad .) with zero Dirichlet boundary and
// harmonic-mean face coefficients.  Symmetric positive definite; the
// off-diagonal entries are nonpositive and rows are diagonally dominant, so
// the inverse is entrywise nonnegative (M-matrix).
class DiffusionOperator {
 public:
  DiffusionOperator(const SpaceGrid& grid, const CoefficientField& coeff, double time,
                    double shift);

  void apply(const ScalarField& x, ScalarField& y) const;
  ScalarField apply(const ScalarField& x) const;

  const SpaceGrid& grid() const { return grid_; }
  const FluxField& face_coefficients() const { return face_coeff_; }
  const ScalarField& diagonal() const { return diag_; }
  double shift() const { return shift_; }

 private:
  SpaceGrid grid_;
  double shift_;
  FluxField face_coeff_;
  ScalarField diag_;
};

struct SolveStats {
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;  // relative, recomputed from the true residual
};

// Jacobi-preconditioned conjugate gradients, zero initial guess unless x is
// prefilled.  On success x holds the solution with |b - Lx| <= rel_tol * |b|.
SolveStats pcg_solve(const DiffusionOperator& op, const ScalarField& rhs, ScalarField& x,
                     double rel_tol, int max_iterations);

}  // namespace kspe
