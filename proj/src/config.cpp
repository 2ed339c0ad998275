#include "kspe/config.hpp"

#include <fstream>
#include <set>

namespace kspe {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& scenario, const std::string& what) {
  if (scenario.empty()) throw config_error("config error: " + what);
  throw config_error("config error: scenario '" + scenario + "': " + what);
}

double get_number(const json& j, const char* key, double fallback, const std::string& id) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) fail(id, std::string(key) + " must be a number");
  return j[key].get<double>();
}

int get_int(const json& j, const char* key, int fallback, const std::string& id) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer()) fail(id, std::string(key) + " must be an integer");
  return j[key].get<int>();
}

CoefficientField parse_coefficient(const json& j, int dim, bool time_dependent_ok,
                                   const std::string& id, const char* role) {
  if (j.is_null()) return CoefficientField::identity(dim);
  if (!j.is_object()) fail(id, std::string(role) + " must be an object");
  const std::string family = j.value("family", "identity");

  static const std::set<std::string> anisotropic = {
      "full", "full-tensor", "anisotropic", "rotated", "off-diagonal"};
  if (anisotropic.count(family))
    throw unsupported_anisotropy("config error: scenario '" + id + "': " + role +
                                 " family '" + family + "' has off-diagonal structure; "
                                 "only diagonal families are supported");

  CoefficientField out = CoefficientField::identity(dim);
  try {
    if (family == "identity") {
      out = CoefficientField::identity(dim);
    } else if (family == "checkerboard" || family == "checkerboard-diagonal") {
      out = CoefficientField::checkerboard(dim, get_number(j, "low", 1.0, id),
                                           get_number(j, "high", 10.0, id),
                                           get_number(j, "period", 0.25, id));
    } else if (family == "layered" || family == "layered-diagonal") {
      out = CoefficientField::layered(dim, get_number(j, "low", 1.0, id),
                                      get_number(j, "high", 10.0, id),
                                      get_number(j, "period", 0.25, id),
                                      get_int(j, "axis", 0, id));
    } else if (family == "time-modulated" || family == "time-modulated-diagonal") {
      out = CoefficientField::time_modulated(dim, get_number(j, "base", 1.0, id),
                                             get_number(j, "amplitude", 0.5, id));
    } else {
      fail(id, std::string(role) + " family '" + family + "' is not recognized");
    }
    if (j.contains("alpha") || j.contains("beta"))
      out = out.with_declared_bounds(get_number(j, "alpha", out.alpha(), id),
                                     get_number(j, "beta", out.beta(), id));
  } catch (const invalid_input& e) {
    fail(id, std::string(role) + ": " + e.what());
  }
  if (!time_dependent_ok && out.time_dependent())
    fail(id, std::string(role) + " must be time-independent");
  return out;
}

json coefficient_to_json(const CoefficientField& c) {
  json j;
  j["family"] = to_string(c.family());
  switch (c.family()) {
    case CoefficientFamily::identity:
      break;
    case CoefficientFamily::checkerboard_diagonal:
    case CoefficientFamily::layered_diagonal:
      j["low"] = c.low();
      j["high"] = c.high();
      j["period"] = c.period();
      if (c.family() == CoefficientFamily::layered_diagonal) j["axis"] = c.layer_axis();
      break;
    case CoefficientFamily::time_modulated_diagonal:
      j["base"] = c.low();
      j["amplitude"] = c.high();
      break;
  }
  j["alpha"] = c.alpha();
  j["beta"] = c.beta();
  return j;
}

std::pair<SourceSpec, std::optional<regime::Rational>> parse_source(const json& j, int dim,
                                                                    const std::string& id) {
  SourceSpec spec;
  std::optional<regime::Rational> m;
  if (j.is_null()) return {spec, m};
  if (!j.is_object()) fail(id, "source must be an object");
  const std::string kind = j.value("kind", "constant");
  if (kind == "constant") {
    spec.kind = SourceKind::constant;
    spec.value = get_number(j, "value", 1.0, id);
  } else if (kind == "separable") {
    spec.kind = SourceKind::separable;
    spec.amplitude = get_number(j, "amplitude", 1.0, id);
    spec.decay = get_number(j, "decay", 0.0, id);
  } else if (kind == "spatial-singularity" || kind == "singular") {
    spec.kind = SourceKind::spatial_singularity;
    if (j.contains("m")) {
      regime::Rational r(2);
      if (j["m"].is_string())
        r = regime::parse_rational(j["m"].get<std::string>());
      else if (j["m"].is_number_integer())
        r = regime::Rational(j["m"].get<long long>());
      else
        fail(id, "source m must be an integer or an exact fraction string like \"6/5\"");
      spec.m_num = r.numerator();
      spec.m_den = r.denominator();
      m = r;
    }
    spec.margin = get_number(j, "margin", 0.1, id);
    if (j.contains("center")) {
      if (!j["center"].is_array() || j["center"].size() != static_cast<std::size_t>(dim))
        fail(id, "source center must be an array of dim coordinates");
      for (int d = 0; d < dim; ++d) spec.center[d] = j["center"][d].get<double>();
    }
  } else {
    fail(id, "source kind '" + kind + "' is not recognized");
  }
  try {
    spec.validate(dim);
  } catch (const invalid_input& e) {
    fail(id, e.what());
  }
  return {spec, m};
}

json source_to_json(const SourceSpec& s) {
  json j;
  j["kind"] = to_string(s.kind);
  switch (s.kind) {
    case SourceKind::constant:
      j["value"] = s.value;
      break;
    case SourceKind::separable:
      j["amplitude"] = s.amplitude;
      j["decay"] = s.decay;
      break;
    case SourceKind::spatial_singularity:
      j["m"] = regime::to_string(regime::Rational(s.m_num, s.m_den));
      j["margin"] = s.margin;
      j["center"] = json::array();
      for (int d = 0; d < 3; ++d) j["center"].push_back(s.center[d]);
      break;
  }
  return j;
}

SourceSpec source_from_json(const json& j, int dim) {
  auto [spec, m] = parse_source(j, dim, "");
  return spec;
}

Scenario parse_scenario(const json& j) {
  if (!j.is_object()) throw config_error("config error: scenario entries must be objects");
  Scenario s;
  if (!j.contains("id") || !j["id"].is_string() || j["id"].get<std::string>().empty())
    throw config_error("config error: every scenario needs a nonempty string id");
  s.id = j["id"].get<std::string>();
  // ids name output directories and files
  if (s.id.find_first_not_of("abcdefghijklmnopqrstuvwxyz"
                             "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
                             "0123456789._-") != std::string::npos)
    fail(s.id, "id may only use letters, digits, '.', '_' and '-'");

  s.dim = get_int(j, "dim", 3, s.id);
  if (s.dim != 2 && s.dim != 3) fail(s.id, "dim must be 2 or 3");
  s.cells = get_int(j, "cells", 12, s.id);
  s.theta = get_number(j, "theta", 0.5, s.id);
  if (!(s.theta > 0.0) || !(s.theta < 2.0 / s.dim))
    fail(s.id, "theta must lie in (0, 2/dim)");
  s.t_final = get_number(j, "t_final", 0.05, s.id);
  if (!(s.t_final > 0.0)) fail(s.id, "t_final must be positive");
  s.dt = get_number(j, "dt", 1e-3, s.id);
  if (!(s.dt > 0.0)) fail(s.id, "dt must be positive");
  s.trunc_level = get_number(j, "trunc_level", 64.0, s.id);
  if (!(s.trunc_level >= 1.0)) fail(s.id, "trunc_level must be >= 1");
  s.fp_tol = get_number(j, "fp_tol", 1e-10, s.id);
  s.fp_max_iter = get_int(j, "fp_max_iter", 50, s.id);
  s.lin_tol = get_number(j, "lin_tol", 1e-10, s.id);
  s.lin_max_iter = get_int(j, "lin_max_iter", 0, s.id);
  s.dump_trajectory = j.value("dump_trajectory", false);
  s.seed = j.value("seed", std::uint64_t{1});

  s.diff = parse_coefficient(j.contains("A") ? j["A"] : json(), s.dim, true, s.id, "A");
  s.drift = parse_coefficient(j.contains("M") ? j["M"] : json(), s.dim, false, s.id, "M");
  std::tie(s.source, s.source_m) =
      parse_source(j.contains("source") ? j["source"] : json(), s.dim, s.id);

  if (j.contains("sweep")) {
    const json& sw = j["sweep"];
    if (!sw.is_object()) fail(s.id, "sweep must be an object");
    if (sw.contains("truncation_levels"))
      for (const auto& v : sw["truncation_levels"]) {
        const double lvl = v.get<double>();
        if (!(lvl >= 1.0)) fail(s.id, "truncation levels must be >= 1");
        s.sweep.truncation_levels.push_back(lvl);
      }
    if (sw.contains("grid_sizes"))
      for (const auto& v : sw["grid_sizes"]) s.sweep.grid_sizes.push_back(v.get<int>());
    s.sweep.dt_h2_factor = get_number(sw, "dt_h2_factor", 0.0, s.id);
    if (sw.contains("p_grid"))
      for (const auto& v : sw["p_grid"]) {
        const double p = v.get<double>();
        if (!(p >= 1.0)) fail(s.id, "p_grid exponents must be >= 1");
        s.sweep.p_grid.push_back(p);
      }
  }

  // Grid construction and the off-lattice requirement must hold for the base
  // grid and every sweep size.
  std::vector<int> sizes{s.cells};
  sizes.insert(sizes.end(), s.sweep.grid_sizes.begin(), s.sweep.grid_sizes.end());
  for (int size : sizes) {
    try {
      const SpaceGrid g = SpaceGrid::make(s.dim, size);
      s.source.validate_on_grid(g);
    } catch (const invalid_input& e) {
      fail(s.id, e.what());
    }
  }
  return s;
}

}  // namespace

ProblemConfig Scenario::instantiate(int cells_override, double trunc_override,
                                    double dt_override) const {
  ProblemConfig p;
  p.grid = SpaceGrid::make(dim, cells_override > 0 ? cells_override : cells);
  p.theta = theta;
  p.trunc_level = trunc_override > 0.0 ? trunc_override : trunc_level;
  p.dt = dt_override > 0.0 ? dt_override : dt;
  p.t_final = t_final;
  p.diff = diff;
  p.drift = drift;
  p.source = source;
  p.fp_tol = fp_tol;
  p.fp_max_iter = fp_max_iter;
  p.lin_tol = lin_tol;
  p.lin_max_iter = lin_max_iter;
  p.validate();
  return p;
}

HarnessConfig parse_config(const nlohmann::json& root) {
  if (!root.is_object() || !root.contains("scenarios") || !root["scenarios"].is_array())
    throw config_error("config error: expected a top-level object with a 'scenarios' array");
  HarnessConfig cfg;
  std::set<std::string> seen;
  for (const auto& j : root["scenarios"]) {
    Scenario s;
    try {
      s = parse_scenario(j);
    } catch (const nlohmann::json::exception& e) {
      throw config_error(std::string("config error: malformed scenario entry: ") + e.what());
    }
    if (!seen.insert(s.id).second)
      throw config_error("config error: duplicate scenario id '" + s.id + "'");
    cfg.scenarios.push_back(std::move(s));
  }
  if (cfg.scenarios.empty()) throw config_error("config error: no scenarios defined");
  return cfg;
}

HarnessConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw config_error("config error: cannot open '" + path.string() + "'");
  nlohmann::json root;
  try {
    in >> root;
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error("config error: '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_config(root);
}

nlohmann::json to_json(const Scenario& s) {
  json j;
  j["id"] = s.id;
  j["dim"] = s.dim;
  j["cells"] = s.cells;
  j["theta"] = s.theta;
  j["t_final"] = s.t_final;
  j["dt"] = s.dt;
  j["trunc_level"] = s.trunc_level;
  j["A"] = coefficient_to_json(s.diff);
  j["M"] = coefficient_to_json(s.drift);
  j["source"] = source_to_json(s.source);
  j["fp_tol"] = s.fp_tol;
  j["fp_max_iter"] = s.fp_max_iter;
  j["lin_tol"] = s.lin_tol;
  j["lin_max_iter"] = s.lin_max_iter;
  j["dump_trajectory"] = s.dump_trajectory;
  j["seed"] = s.seed;
  return j;
}

nlohmann::json to_json(const ProblemConfig& p) {
  json j;
  j["dim"] = p.grid.dim;
  j["cells"] = p.grid.cells;
  j["theta"] = p.theta;
  j["trunc_level"] = p.trunc_level;
  j["dt"] = p.dt;
  j["t_final"] = p.t_final;
  j["A"] = coefficient_to_json(p.diff);
  j["M"] = coefficient_to_json(p.drift);
  j["source"] = source_to_json(p.source);
  j["fp_tol"] = p.fp_tol;
  j["fp_max_iter"] = p.fp_max_iter;
  j["lin_tol"] = p.lin_tol;
  j["lin_max_iter"] = p.lin_max_iter;
  return j;
}

ProblemConfig problem_config_from_json(const nlohmann::json& j) {
  ProblemConfig p;
  const int dim = j.at("dim").get<int>();
  p.grid = SpaceGrid::make(dim, j.at("cells").get<int>());
  p.theta = j.at("theta").get<double>();
  p.trunc_level = j.at("trunc_level").get<double>();
  p.dt = j.at("dt").get<double>();
  p.t_final = j.at("t_final").get<double>();
  p.diff = parse_coefficient(j.at("A"), dim, true, "", "A");
  p.drift = parse_coefficient(j.at("M"), dim, false, "", "M");
  p.source = source_from_json(j.at("source"), dim);
  p.fp_tol = j.at("fp_tol").get<double>();
  p.fp_max_iter = j.at("fp_max_iter").get<int>();
  p.lin_tol = j.at("lin_tol").get<double>();
  p.lin_max_iter = j.at("lin_max_iter").get<int>();
  p.validate();
  return p;
}

}  // namespace kspe
