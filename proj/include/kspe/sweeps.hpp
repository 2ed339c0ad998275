#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "kspe/config.hpp"
#include "kspe/norms.hpp"
#include "kspe/report.hpp"

namespace kspe {

struct RunOutcome {
  Trajectory traj;
  int halvings = 0;     // dt halvings spent on fixed-point rescues
  double final_dt = 0;  // dt actually used
};

// run() with up to three dt/2 retries when the fixed-point loop gives up.
RunOutcome run_with_retries(const ProblemConfig& config);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

enum class HarnessMode { solve, sweep, verify };

// Everything one scenario produces; emission is separate so scenarios can run
// concurrently and still serialize deterministically.
struct ScenarioProducts {
  std::string id;
  nlohmann::ordered_json summary;
  std::vector<report::NormRow> truncation_rows;
  std::vector<report::NormRow> refinement_rows;
  std::vector<std::pair<std::string, Trajectory>> dumps;  // tag -> trajectory
  std::vector<CheckResult> checks;
  bool failed() const;
};

ScenarioProducts run_scenario(const Scenario& scenario, HarnessMode mode);

// Writes CSVs, plot series, dumps and the merged summary under `outdir`.
void emit_products(const std::filesystem::path& outdir,
                   const std::vector<ScenarioProducts>& products);

// Names the norm columns every truncation-sweep row carries.
std::string primary_density_norm_name(const Scenario&);

}  // namespace kspe
