#include "kspe/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kspe/truncations.hpp"

namespace kspe {

namespace {

const std::vector<ScalarField>& pick(const Trajectory& traj, TrajectoryField f) {
  return f == TrajectoryField::density ? traj.u : traj.psi;
}

double spatial_norm(const ScalarField& v, const BochnerSpec& spec) {
  if (spec.with_gradient) return lp_norm(gradient(v), spec.space_exponent);
  return lp_norm(v, spec.space_exponent);
}

}  // namespace

double bochner_norm(const Trajectory& traj, const BochnerSpec& spec, TrajectoryField field) {
  if (std::isnan(spec.time_exponent) || spec.time_exponent < 1.0)
    throw invalid_input("bochner_norm: time exponent must lie in [1, inf]");
  const auto& fields = pick(traj, field);
  if (fields.empty()) throw invalid_input("bochner_norm: empty trajectory");

  if (std::isinf(spec.time_exponent)) {
    double best = 0.0;
    for (const auto& v : fields) best = std::max(best, spatial_norm(v, spec));
    return best;
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < traj.steps(); ++j)
    sum += traj.step_weight(j) * std::pow(spatial_norm(fields[j], spec), spec.time_exponent);
  return std::pow(sum, 1.0 / spec.time_exponent);
}

double gn_ratio(const Trajectory& traj) {
  const int dim = traj.config.grid.dim;
  const double p = 2.0 * (dim + 2.0) / dim;
  const double vol = traj.config.grid.cell_volume();

  double lhs = 0.0, dirichlet = 0.0;
  double sup_l2 = 0.0;
  for (std::size_t j = 0; j < traj.u.size(); ++j)
    sup_l2 = std::max(sup_l2, lp_norm(traj.u[j], 2.0));
  for (std::size_t j = 0; j < traj.steps(); ++j) {
    const double w = traj.step_weight(j);
    double cell_sum = 0.0;
    for (double x : traj.u[j].values()) cell_sum += std::pow(std::fabs(x), p);
    lhs += w * vol * cell_sum;
    const FluxField grad = gradient(traj.u[j]);
    double face_sum = 0.0;
    for (int a = 0; a < dim; ++a)
      for (double x : grad.axis(a)) face_sum += x * x;
    dirichlet += w * vol * face_sum;
  }
  const double rhs = std::pow(sup_l2, 4.0 / dim) * dirichlet;
  if (rhs == 0.0) return 0.0;
  return lhs / rhs;
}

EntropyTerms entropy_terms(const Trajectory& traj, double level, std::size_t time_index) {
  if (level < 0.0) throw invalid_input("entropy_residual: level must be nonnegative");
  if (time_index >= traj.times.size())
    throw invalid_input("entropy_residual: stamp index out of range");

  const SpaceGrid& g = traj.config.grid;
  const double vol = g.cell_volume();
  EntropyTerms terms;

  // State term at the evaluation stamp.
  double state = 0.0;
  for (double x : traj.u[time_index].values()) state += trunc::primitive(x, level);
  terms.state = vol * state;

  const FluxField drift_faces = face_coefficients(traj.config.drift, g, 0.0);
  for (std::size_t s = 1; s <= time_index; ++s) {
    const double w = traj.times[s] - traj.times[s - 1];
    const ScalarField& us = traj.u[s];

    ScalarField clamped(g);
    for (std::size_t i = 0; i < us.size(); ++i) clamped[i] = trunc::truncate(us[i], level);
    const FluxField grad_u = gradient(us);
    const FluxField grad_clamped = gradient(clamped);

    const FluxField diff_faces = face_coefficients(traj.config.diff, g, traj.times[s]);
    double diff_sum = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      const auto& af = diff_faces.axis(a);
      const auto& gu = grad_u.axis(a);
      const auto& gc = grad_clamped.axis(a);
      for (std::size_t i = 0; i < af.size(); ++i) diff_sum += af[i] * gu[i] * gc[i];
    }
    terms.diffusion += w * vol * diff_sum;

    // Raw-density upwind flux; an infinite clamp level disables the clamp.
    const FluxField flux =
        drift_flux(us, traj.psi[s], drift_faces, std::numeric_limits<double>::infinity());
    double drift_sum = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      const auto& fl = flux.axis(a);
      const auto& gc = grad_clamped.axis(a);
      for (std::size_t i = 0; i < fl.size(); ++i) drift_sum += fl[i] * gc[i];
    }
    terms.drift += w * vol * drift_sum;

    const ScalarField f = generate_source(traj.config.source, g, traj.times[s]);
    double src_sum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) src_sum += f[i] * clamped[i];
    terms.source += w * vol * src_sum;
  }
  return terms;
}

double EntropyTerms::scale() const {
  return 1.0 + std::fabs(state) + std::fabs(diffusion) + std::fabs(drift) + std::fabs(source);
}

double entropy_residual(const Trajectory& traj, double level, std::size_t time_index) {
  return entropy_terms(traj, level, time_index).residual();
}

double empirical_exponent(const std::vector<RefinementSeries>& series, double slope_tol) {
  if (series.empty()) throw invalid_input("empirical_exponent: no candidate exponents");
  double best = 0.0;
  for (const auto& s : series) {
    if (s.points.size() < 3)
      throw invalid_input("empirical_exponent: need at least three refinement levels");
    if (!(s.exponent >= 1.0))
      throw invalid_input("empirical_exponent: candidate exponents must be >= 1");

    // Least-squares slope of log(value) against log(1/h).
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double count = static_cast<double>(s.points.size());
    for (const auto& [h, value] : s.points) {
      if (!(h > 0.0)) throw invalid_input("empirical_exponent: spacings must be positive");
      if (value < 0.0) throw invalid_input("empirical_exponent: norms must be nonnegative");
      const double x = std::log(1.0 / h);
      const double y = std::log(std::max(value, 1e-300));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double denom = count * sxx - sx * sx;
    if (denom == 0.0) throw invalid_input("empirical_exponent: refinement levels coincide");
    const double slope = (count * sxy - sx * sy) / denom;
    if (slope <= slope_tol) best = std::max(best, s.exponent);
  }
  return best;
}

}  // namespace kspe
