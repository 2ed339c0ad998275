#include "kspe/sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

#include "kspe/truncations.hpp"

namespace kspe {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

RunOutcome run_with_retries(const ProblemConfig& config) {
  RunOutcome out;
  ProblemConfig attempt = config;
  for (int halvings = 0;; ++halvings) {
    try {
      out.traj = run(attempt);
      out.halvings = halvings;
      out.final_dt = attempt.dt;
      return out;
    } catch (const step_failure&) {
      if (halvings == 3) throw;  // three rescues is the budget
      attempt.dt *= 0.5;
    }
  }
}

bool ScenarioProducts::failed() const {
  for (const auto& c : checks)
    if (!c.pass) return true;
  return false;
}

std::string primary_density_norm_name(const Scenario& s) {
  if (s.source_m && s.dim == 3 && *s.source_m < regime::Rational(s.dim + 2, 2))
    return "u_mdstar";
  return "u_sup";
}

namespace {

double as_double(const regime::Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

// Space-time exponent backing the "u_mdstar" column, when the theory defines
// one for this scenario's data.
std::optional<double> density_exponent(const Scenario& s) {
  if (s.source_m && s.dim == 3 && *s.source_m < regime::Rational(s.dim + 2, 2))
    return as_double(regime::dstar(*s.source_m, s.dim));
  return std::nullopt;
}

struct RunNorms {
  double psi_sup = 0.0;
  double psi_grad = 0.0;   // L^inf in time of the Dirichlet seminorm of psi
  double density = 0.0;    // primary density norm (u_mdstar or u_sup)
  double u_linf_l1 = 0.0;  // running mass ceiling
};

RunNorms measure(const Scenario& s, const Trajectory& traj) {
  RunNorms n;
  const double inf = std::numeric_limits<double>::infinity();
  n.psi_sup = bochner_norm(traj, {inf, inf, false}, TrajectoryField::potential);
  n.psi_grad = bochner_norm(traj, {inf, 2.0, true}, TrajectoryField::potential);
  if (auto p = density_exponent(s))
    n.density = bochner_norm(traj, {*p, *p, false});
  else
    n.density = bochner_norm(traj, {inf, inf, false});
  n.u_linf_l1 = bochner_norm(traj, {inf, 1.0, false});
  return n;
}

// Cumulative clamped source budget up to each stamp; the discrete mass bound
// compares stamp masses against these.
std::vector<double> mass_budget(const Trajectory& traj) {
  const ProblemConfig& c = traj.config;
  std::vector<double> budget(traj.times.size(), 0.0);
  for (std::size_t j = 0; j < traj.steps(); ++j) {
    const ScalarField f = generate_source(c.source, c.grid, traj.times[j + 1]);
    double clamped_mass = 0.0;
    for (double x : f.values()) clamped_mass += trunc::truncate(x, c.trunc_level);
    clamped_mass *= c.grid.cell_volume();
    budget[j + 1] = budget[j] + traj.step_weight(j) * clamped_mass;
  }
  return budget;
}

std::string fmt(double v) { return report::format_double(v); }

CheckResult check_positivity(const Trajectory& traj) {
  double worst = 0.0;
  for (const auto& u : traj.u)
    for (double x : u.values()) worst = std::min(worst, x);
  return {"positivity", !(worst < 0.0), "min node value " + fmt(worst)};
}

CheckResult check_mass_bound(const Trajectory& traj) {
  const std::vector<double> budget = mass_budget(traj);
  double worst_excess = -std::numeric_limits<double>::infinity();
  std::size_t worst_stamp = 0;
  bool pass = true;
  for (std::size_t k = 1; k < traj.times.size(); ++k) {
    const double mass = lp_norm(traj.u[k], 1.0);
    const double slack = 1e-10 * std::max(1.0, budget[k]);
    const double excess = mass - budget[k];
    if (excess > worst_excess) {
      worst_excess = excess;
      worst_stamp = k;
    }
    if (excess > slack) pass = false;
  }
  return {"mass_bound", pass,
          "max(mass - source budget) = " + fmt(worst_excess) + " at stamp " +
              std::to_string(worst_stamp)};
}

std::vector<std::size_t> probe_stamps(const Trajectory& traj) {
  std::vector<std::size_t> idx;
  const std::size_t last = traj.steps();
  if (last == 0) return idx;
  idx.push_back(1);
  if ((last + 1) / 2 > 1) idx.push_back((last + 1) / 2);
  if (last > idx.back()) idx.push_back(last);
  return idx;
}

std::vector<CheckResult> check_entropy(const Trajectory& traj) {
  double u_max = 0.0;
  for (const auto& u : traj.u)
    for (double x : u.values()) u_max = std::max(u_max, std::fabs(x));

  std::vector<std::pair<std::string, double>> levels{{"zero", 0.0}};
  if (u_max > 0.0) {
    levels.emplace_back("half_range", 0.5 * u_max);
    levels.emplace_back("past_range", 2.0 * u_max);
  }

  std::vector<CheckResult> out;
  for (const auto& [tag, level] : levels) {
    bool pass = true;
    double worst = -std::numeric_limits<double>::infinity();
    std::size_t worst_stamp = 0;
    for (std::size_t idx : probe_stamps(traj)) {
      const EntropyTerms terms = entropy_terms(traj, level, idx);
      const double r = terms.residual();
      const bool ok = level == 0.0 ? r == 0.0 : r <= 1e-6 * terms.scale();
      if (!ok) pass = false;
      if (r > worst) {
        worst = r;
        worst_stamp = idx;
      }
    }
    out.push_back({"entropy_" + tag, pass,
                   "level " + fmt(level) + ", worst residual " + fmt(worst) + " at stamp " +
                       std::to_string(worst_stamp)});
  }
  return out;
}

CheckResult check_gn(const Trajectory& traj) {
  const double ratio = gn_ratio(traj);
  if (!std::isfinite(ratio) || ratio < 0.0)
    return {"gn_ratio", false, "ratio " + fmt(ratio) + " is not a finite nonnegative number"};

  Trajectory scaled = traj;
  for (auto& u : scaled.u)
    for (double& x : u.values()) x *= 2.0;
  const double scaled_ratio = gn_ratio(scaled);
  const double drift = std::fabs(scaled_ratio - ratio);
  const bool invariant = drift <= 1e-12 * std::max(1.0, ratio);
  return {"gn_ratio", invariant,
          "ratio " + fmt(ratio) + ", change under u -> 2u: " + fmt(drift)};
}

struct LevelRun {
  double level = 0.0;
  RunNorms norms;
  int halvings = 0;
};

std::vector<LevelRun> run_truncation_levels(const Scenario& s) {
  std::vector<double> levels = s.sweep.truncation_levels;
  std::sort(levels.begin(), levels.end());
  std::vector<LevelRun> out;
  for (double level : levels) {
    const RunOutcome run = run_with_retries(s.instantiate(0, level));
    out.push_back({level, measure(s, run.traj), run.halvings});
  }
  return out;
}

void append_truncation_rows(const Scenario& s, const std::vector<LevelRun>& runs,
                            std::vector<report::NormRow>& rows) {
  const std::string density_name = primary_density_norm_name(s);
  for (const auto& r : runs) {
    rows.push_back({s.id, "trunc_level", r.level, "psi_sup", r.norms.psi_sup});
    rows.push_back({s.id, "trunc_level", r.level, "psi_grad_linf_l2", r.norms.psi_grad});
    rows.push_back({s.id, "trunc_level", r.level, density_name, r.norms.density});
    rows.push_back({s.id, "trunc_level", r.level, "u_linf_l1", r.norms.u_linf_l1});
  }
}

double relative_change(double a, double b) {
  const double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
  return std::fabs(a - b) / scale;
}

// Uniformity of the potential bounds over the two largest truncation levels:
// the elliptic estimates do not see the truncation parameter, so the numbers
// must flatten out as the level grows.
CheckResult check_uniformity(const std::vector<LevelRun>& runs) {
  const LevelRun& lo = runs[runs.size() - 2];
  const LevelRun& hi = runs.back();
  const double d_sup = relative_change(lo.norms.psi_sup, hi.norms.psi_sup);
  const double d_grad = relative_change(lo.norms.psi_grad, hi.norms.psi_grad);
  const bool pass = d_sup < 0.05 && d_grad < 0.05;
  std::ostringstream detail;
  detail << "levels " << fmt(lo.level) << " -> " << fmt(hi.level) << ": psi_sup moves "
         << fmt(d_sup) << ", psi_grad moves " << fmt(d_grad);
  return {"psi_uniformity", pass, detail.str()};
}

ordered_json uniformity_json(const Scenario& s, const std::vector<LevelRun>& runs) {
  ordered_json levels = ordered_json::array();
  for (const auto& r : runs) {
    ordered_json row;
    row["trunc_level"] = r.level;
    row["psi_sup"] = r.norms.psi_sup;
    row["psi_grad_linf_l2"] = r.norms.psi_grad;
    row[primary_density_norm_name(s)] = r.norms.density;
    row["u_linf_l1"] = r.norms.u_linf_l1;
    row["dt_halvings"] = r.halvings;
    levels.push_back(row);
  }
  ordered_json j;
  j["levels"] = levels;
  if (runs.size() >= 2) {
    const CheckResult c = check_uniformity(runs);
    j["top_pair_uniform"] = c.pass;
    j["detail"] = c.detail;
  }
  return j;
}

std::vector<double> refinement_p_grid(const Scenario& s) {
  if (!s.sweep.p_grid.empty()) return s.sweep.p_grid;
  return {1.0, 4.0 / 3.0, 5.0 / 3.0, 2.0, 7.0 / 3.0, 10.0 / 3.0, 4.0, 5.0};
}

ordered_json refinement_study(const Scenario& s, std::vector<report::NormRow>& rows) {
  std::vector<int> sizes = s.sweep.grid_sizes;
  std::sort(sizes.begin(), sizes.end());
  const std::vector<double> p_grid = refinement_p_grid(s);

  const double h_base = 1.0 / s.cells;
  const double factor =
      s.sweep.dt_h2_factor > 0.0 ? s.sweep.dt_h2_factor : s.dt / (h_base * h_base);

  std::vector<RefinementSeries> series;
  for (double p : p_grid) series.push_back({p, {}});
  std::vector<std::pair<double, double>> sup_points;

  ordered_json runs = ordered_json::array();
  for (int size : sizes) {
    const double h = 1.0 / size;
    const double dt = std::min(factor * h * h, s.t_final);
    const RunOutcome run = run_with_retries(s.instantiate(size, 0.0, dt));
    const double inf = std::numeric_limits<double>::infinity();
    const double sup = bochner_norm(run.traj, {inf, inf, false});
    sup_points.emplace_back(h, sup);
    rows.push_back({s.id, "h", h, "u_sup", sup});
    for (std::size_t i = 0; i < p_grid.size(); ++i) {
      const double value = bochner_norm(run.traj, {p_grid[i], p_grid[i], false});
      series[i].points.emplace_back(h, value);
      rows.push_back({s.id, "h", h, "u_lp_" + fmt(p_grid[i]), value});
    }
    ordered_json row;
    row["cells"] = size;
    row["h"] = h;
    row["dt"] = run.final_dt;
    row["dt_halvings"] = run.halvings;
    row["u_sup"] = sup;
    runs.push_back(row);
  }

  ordered_json j;
  j["dt_h2_factor"] = factor;
  j["runs"] = runs;
  if (sizes.size() >= 3) {
    const double fitted = empirical_exponent(series);
    j["fitted_exponent"] = fitted;
    if (auto mdstar = density_exponent(s)) {
      const double target =
          std::min(*mdstar, *std::max_element(p_grid.begin(), p_grid.end()));
      j["target_exponent"] = target;
      j["verdict"] = fitted >= 0.8 * target ? "consistent" : "inconsistent";
    } else {
      // No integrability target: fall back to sup-norm stability.
      double lo = sup_points.front().second, hi = lo;
      for (const auto& [h, v] : sup_points) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      j["sup_spread"] = relative_change(lo, hi);
      j["verdict"] = relative_change(lo, hi) < 0.15 ? "sup_stable" : "sup_growing";
    }
  } else {
    j["verdict"] = "skipped (need at least three grid sizes)";
  }
  return j;
}

ordered_json regime_json(const Scenario& s) {
  const regime::RegimeReport rep = regime::classify(*s.source_m, s.dim);
  ordered_json j;
  j["m"] = regime::to_string(rep.m);
  j["classification"] = regime::to_string(rep.regime);
  if (rep.m_star) j["m_star"] = regime::to_string(*rep.m_star);
  if (rep.m_dstar) j["m_dstar"] = regime::to_string(*rep.m_dstar);
  if (rep.gamma) j["energy_power"] = regime::to_string(*rep.gamma);
  ordered_json spaces = ordered_json::array();
  for (const auto& claim : rep.predicted_spaces) spaces.push_back(claim.to_text());
  j["predicted_spaces"] = spaces;
  return j;
}

ordered_json stats_json(const Trajectory& traj) {
  int fp_max = 0, elliptic = 0, parabolic = 0;
  double clip = 0.0;
  for (const auto& st : traj.step_stats) {
    fp_max = std::max(fp_max, st.fixed_point_iterations);
    elliptic += st.elliptic_iterations;
    parabolic += st.parabolic_iterations;
    clip = std::max(clip, st.clip_depth);
  }
  ordered_json j;
  j["steps"] = traj.steps();
  j["fixed_point_iterations_max"] = fp_max;
  j["elliptic_iterations_total"] = elliptic;
  j["parabolic_iterations_total"] = parabolic;
  j["clip_depth_max"] = clip;
  return j;
}

}  // namespace

ScenarioProducts run_scenario(const Scenario& scenario, HarnessMode mode) {
  ScenarioProducts out;
  out.id = scenario.id;

  const RunOutcome main_run = run_with_retries(scenario.instantiate());
  const Trajectory& traj = main_run.traj;
  const RunNorms norms = measure(scenario, traj);
  const double inf = std::numeric_limits<double>::infinity();

  ordered_json& summary = out.summary;
  summary["id"] = scenario.id;
  summary["mode"] = mode == HarnessMode::solve   ? "solve"
                    : mode == HarnessMode::sweep ? "sweep"
                                                 : "verify";
  summary["dim"] = scenario.dim;
  summary["cells"] = scenario.cells;
  summary["theta"] = scenario.theta;
  summary["trunc_level"] = scenario.trunc_level;
  summary["dt"] = main_run.final_dt;
  summary["dt_halvings"] = main_run.halvings;
  summary["t_final"] = scenario.t_final;
  summary["stats"] = stats_json(traj);

  ordered_json norm_block;
  norm_block["mass_final"] = lp_norm(traj.u.back(), 1.0);
  norm_block["u_sup"] = bochner_norm(traj, {inf, inf, false});
  norm_block["u_linf_l2"] = bochner_norm(traj, {inf, 2.0, false});
  norm_block["u_l2_grad_l2"] = bochner_norm(traj, {2.0, 2.0, true});
  norm_block["u_linf_l1"] = norms.u_linf_l1;
  if (auto p = density_exponent(scenario)) {
    norm_block["mdstar_exponent"] = *p;
    norm_block["u_mdstar"] = norms.density;
  }
  norm_block["psi_sup"] = norms.psi_sup;
  norm_block["psi_grad_linf_l2"] = norms.psi_grad;
  norm_block["gn_ratio"] = gn_ratio(traj);
  summary["norms"] = norm_block;

  if (scenario.source_m) summary["regime"] = regime_json(scenario);

  const bool want_levels = !scenario.sweep.truncation_levels.empty() &&
                           (mode == HarnessMode::sweep ||
                            (mode == HarnessMode::verify &&
                             scenario.sweep.truncation_levels.size() >= 2));
  std::vector<LevelRun> level_runs;
  if (want_levels) {
    level_runs = run_truncation_levels(scenario);
    append_truncation_rows(scenario, level_runs, out.truncation_rows);
    summary["truncation_sweep"] = uniformity_json(scenario, level_runs);
  }

  if (mode == HarnessMode::sweep && !scenario.sweep.grid_sizes.empty())
    summary["refinement"] = refinement_study(scenario, out.refinement_rows);

  if (mode == HarnessMode::verify) {
    out.checks.push_back(check_positivity(traj));
    out.checks.push_back(check_mass_bound(traj));
    for (auto& c : check_entropy(traj)) out.checks.push_back(std::move(c));
    out.checks.push_back(check_gn(traj));
    if (level_runs.size() >= 2) out.checks.push_back(check_uniformity(level_runs));

    ordered_json checks = ordered_json::array();
    for (const auto& c : out.checks) {
      ordered_json row;
      row["name"] = c.name;
      row["pass"] = c.pass;
      row["detail"] = c.detail;
      checks.push_back(row);
    }
    summary["checks"] = checks;
  }
  summary["pass"] = !out.failed();

  if (scenario.dump_trajectory) out.dumps.emplace_back("run", traj);
  return out;
}

void emit_products(const fs::path& outdir, const std::vector<ScenarioProducts>& products) {
  fs::create_directories(outdir);
  ordered_json merged;
  merged["scenarios"] = ordered_json::array();
  for (const auto& p : products) {
    merged["scenarios"].push_back(p.summary);
    const fs::path dir = outdir / p.id;
    if (!p.truncation_rows.empty() || !p.refinement_rows.empty() || !p.dumps.empty())
      fs::create_directories(dir);
    if (!p.truncation_rows.empty())
      report::write_csv(dir / "truncation.csv", p.truncation_rows);
    if (!p.refinement_rows.empty())
      report::write_csv(dir / "refinement.csv", p.refinement_rows);
    std::vector<report::NormRow> all_rows = p.truncation_rows;
    all_rows.insert(all_rows.end(), p.refinement_rows.begin(), p.refinement_rows.end());
    if (!all_rows.empty()) report::write_series(dir / "series", all_rows);
    for (const auto& [tag, traj] : p.dumps)
      report::dump_trajectory(dir / ("trajectory_" + tag + ".txt"), traj);
  }
  report::write_summary(outdir / "summary.json", merged);
}

}  // namespace kspe
