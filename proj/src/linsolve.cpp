#include "kspe/linsolve.hpp"

#include <cmath>

namespace kspe {

DiffusionOperator::DiffusionOperator(const SpaceGrid& grid, const CoefficientField& coeff,
                                     double time, double shift)
    : grid_(grid), shift_(shift), face_coeff_(kspe::face_coefficients(coeff, grid, time)),
      diag_(grid) {
  if (shift < 0.0) throw invalid_input("diffusion operator: shift must be nonnegative");
  const auto ne = grid_.node_extents();
  const double inv_h2 = 1.0 / (grid_.spacing * grid_.spacing);
  for (int a = 0; a < grid_.dim; ++a) {
    const auto fs = strides_of(grid_.face_extents(a));
    const auto& fv = face_coeff_.axis(a);
    std::size_t idx = 0;
    for (int i0 = 0; i0 < ne[0]; ++i0)
      for (int i1 = 0; i1 < ne[1]; ++i1)
        for (int i2 = 0; i2 < ne[2]; ++i2, ++idx) {
          const int ia[3] = {i0, i1, i2};
          std::size_t base = 0;
          for (int d = 0; d < 3; ++d)
            if (d != a) base += static_cast<std::size_t>(ia[d]) * fs[d];
          const double left = fv[base + static_cast<std::size_t>(ia[a]) * fs[a]];
          const double right = fv[base + static_cast<std::size_t>(ia[a] + 1) * fs[a]];
          diag_[idx] += (left + right) * inv_h2;
        }
  }
  for (std::size_t i = 0; i < diag_.size(); ++i) diag_[i] += shift_;
}

void DiffusionOperator::apply(const ScalarField& x, ScalarField& y) const {
  const auto ne = grid_.node_extents();
  const auto ns = strides_of(ne);
  const double inv_h2 = 1.0 / (grid_.spacing * grid_.spacing);
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = shift_ * x[i];
  for (int a = 0; a < grid_.dim; ++a) {
    const auto fs = strides_of(grid_.face_extents(a));
    const auto& fv = face_coeff_.axis(a);
    std::size_t idx = 0;
    for (int i0 = 0; i0 < ne[0]; ++i0)
      for (int i1 = 0; i1 < ne[1]; ++i1)
        for (int i2 = 0; i2 < ne[2]; ++i2, ++idx) {
          const int ia[3] = {i0, i1, i2};
          std::size_t fbase = 0, nbase = 0;
          for (int d = 0; d < 3; ++d)
            if (d != a) {
              fbase += static_cast<std::size_t>(ia[d]) * fs[d];
              nbase += static_cast<std::size_t>(ia[d]) * ns[d];
            }
          const int j = ia[a];
          const double a_left = fv[fbase + static_cast<std::size_t>(j) * fs[a]];
          const double a_right = fv[fbase + static_cast<std::size_t>(j + 1) * fs[a]];
          const double v = x[idx];
          const double v_left = (j >= 1) ? x[nbase + static_cast<std::size_t>(j - 1) * ns[a]] : 0.0;
          const double v_right =
              (j <= ne[a] - 2) ? x[nbase + static_cast<std::size_t>(j + 1) * ns[a]] : 0.0;
          y[idx] += (a_left * (v - v_left) + a_right * (v - v_right)) * inv_h2;
        }
  }
}

ScalarField DiffusionOperator::apply(const ScalarField& x) const {
  ScalarField y(grid_);
  apply(x, y);
  return y;
}

SolveStats pcg_solve(const DiffusionOperator& op, const ScalarField& rhs, ScalarField& x,
                     double rel_tol, int max_iterations) {
  if (!(rel_tol > 0.0)) throw invalid_input("pcg: tolerance must be positive");
  const std::size_t n = rhs.size();
  if (x.size() != n) x = ScalarField(op.grid());
  if (max_iterations <= 0)
    max_iterations = std::max<int>(1000, static_cast<int>(4 * n));

  const double b_norm = std::sqrt(dot(rhs, rhs));
  SolveStats stats;
  if (b_norm == 0.0) {
    x = ScalarField(op.grid());
    stats.converged = true;
    return stats;
  }

  ScalarField r(op.grid()), z(op.grid()), p(op.grid()), q(op.grid());
  op.apply(x, q);
  for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - q[i];
  const ScalarField& d = op.diagonal();
  for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / d[i];
  p = z;
  double rho = dot(r, z);

  for (int it = 1; it <= max_iterations; ++it) {
    op.apply(p, q);
    const double pq = dot(p, q);
    if (pq <= 0.0)
      throw invariant_violation("pcg: operator lost positive definiteness");
    const double alpha = rho / pq;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    stats.iterations = it;
    if (std::sqrt(dot(r, r)) <= rel_tol * b_norm) {
      // Recursion residual can drift from the true one; accept on the latter.
      op.apply(x, q);
      double true_r2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double ri = rhs[i] - q[i];
        true_r2 += ri * ri;
        r[i] = ri;
      }
      stats.residual = std::sqrt(true_r2) / b_norm;
      if (stats.residual <= rel_tol) {
        stats.converged = true;
        return stats;
      }
      for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / d[i];
      rho = dot(r, z);
      p = z;
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / d[i];
    const double rho_next = dot(r, z);
    const double beta = rho_next / rho;
    rho = rho_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  stats.residual = std::sqrt(dot(r, r)) / b_norm;
  return stats;
}

}  // namespace kspe
