#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kspe/regime.hpp"
#include "kspe/stepper.hpp"

namespace kspe {

struct SweepAxes {
  std::vector<double> truncation_levels;  // for the uniformity sweep
  std::vector<int> grid_sizes;            // for the refinement study
  double dt_h2_factor = 0.0;              // refinement dt = factor * h^2; 0 keeps scenario dt
  std::vector<double> p_grid;             // candidate exponents for the fit
};

struct Scenario {
  std::string id;
  int dim = 3;
  int cells = 12;
  double theta = 0.5;
  double t_final = 0.05;
  double dt = 1e-3;
  double trunc_level = 64.0;
  CoefficientField diff = CoefficientField::identity(3);
  CoefficientField drift = CoefficientField::identity(3);
  SourceSpec source;
  std::optional<regime::Rational> source_m;  // exact m when the source declares one
  double fp_tol = 1e-10;
  int fp_max_iter = 50;
  double lin_tol = 1e-10;
  int lin_max_iter = 0;
  SweepAxes sweep;
  bool dump_trajectory = false;
  std::uint64_t seed = 1;

  ProblemConfig instantiate(int cells_override = 0, double trunc_override = 0.0,
                            double dt_override = 0.0) const;
};

struct HarnessConfig {
  std::vector<Scenario> scenarios;
};

// Parses and validates a JSON config.  Every violation is a config_error with
// the offending scenario named.  Exact fractions (the integrability target m)
// are given as strings like "6/5".
HarnessConfig load_config(const std::filesystem::path& path);
HarnessConfig parse_config(const nlohmann::json& root);

nlohmann::json to_json(const Scenario&);
nlohmann::json to_json(const ProblemConfig&);
ProblemConfig problem_config_from_json(const nlohmann::json&);

}  // namespace kspe
