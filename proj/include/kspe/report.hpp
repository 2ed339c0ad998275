#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "kspe/stepper.hpp"

namespace kspe::report {

// Shortest decimal form that round-trips a double; used for every number the
// harness writes so identical runs emit identical bytes.
std::string format_double(double v);

struct NormRow {
  std::string scenario_id;
  std::string axis_name;   // "trunc_level" or "h"
  double axis_value = 0.0;
  std::string norm_name;
  double value = 0.0;
};

// Long-format CSV, header scenario_id,axis_name,axis_value,norm_name,value,
// rows sorted by (scenario, axis, axis value, norm) regardless of insertion
// order.
void write_csv(const std::filesystem::path& file, std::vector<NormRow> rows);

// One two-column file per (scenario, axis, norm): "axis_value value" lines in
// axis order, ready for plotting.
void write_series(const std::filesystem::path& directory, const std::vector<NormRow>& rows);

void write_summary(const std::filesystem::path& file, const nlohmann::ordered_json& summary);

// Text dump carrying the full problem description and every stamp, written
// with round-trip precision so norms recompute bit-for-bit from the file.
void dump_trajectory(const std::filesystem::path& file, const Trajectory& traj);
Trajectory load_trajectory(const std::filesystem::path& file);

}  // namespace kspe::report
