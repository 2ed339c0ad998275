#include "kspe/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "kspe/config.hpp"

namespace kspe::report {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // Prefer the shortest representation that still round-trips.
  for (int precision = 1; precision < 17; ++precision) {
    char probe[64];
    std::snprintf(probe, sizeof probe, "%.*g", precision, v);
    double back = 0.0;
    std::sscanf(probe, "%lf", &back);
    if (back == v) return probe;
  }
  return buf;
}

namespace {

bool row_less(const NormRow& a, const NormRow& b) {
  if (a.scenario_id != b.scenario_id) return a.scenario_id < b.scenario_id;
  if (a.axis_name != b.axis_name) return a.axis_name < b.axis_name;
  if (a.axis_value != b.axis_value) return a.axis_value < b.axis_value;
  return a.norm_name < b.norm_name;
}

std::ofstream open_out(const std::filesystem::path& file) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);  // binary keeps newlines byte-stable
  if (!out) throw config_error("report: cannot write '" + file.string() + "'");
  return out;
}

}  // namespace

void write_csv(const std::filesystem::path& file, std::vector<NormRow> rows) {
  std::sort(rows.begin(), rows.end(), row_less);
  std::ofstream out = open_out(file);
  out << "scenario_id,axis_name,axis_value,norm_name,value\n";
  for (const auto& r : rows)
    out << r.scenario_id << ',' << r.axis_name << ',' << format_double(r.axis_value) << ','
        << r.norm_name << ',' << format_double(r.value) << '\n';
}

void write_series(const std::filesystem::path& directory, const std::vector<NormRow>& rows) {
  std::map<std::string, std::vector<const NormRow*>> by_file;
  for (const auto& r : rows)
    by_file[r.scenario_id + "__" + r.axis_name + "__" + r.norm_name + ".dat"].push_back(&r);
  std::filesystem::create_directories(directory);
  for (auto& [name, group] : by_file) {
    std::sort(group.begin(), group.end(),
              [](const NormRow* a, const NormRow* b) { return a->axis_value < b->axis_value; });
    std::ofstream out = open_out(directory / name);
    for (const NormRow* r : group)
      out << format_double(r->axis_value) << ' ' << format_double(r->value) << '\n';
  }
}

void write_summary(const std::filesystem::path& file, const nlohmann::ordered_json& summary) {
  std::ofstream out = open_out(file);
  out << summary.dump(2) << '\n';
}

void dump_trajectory(const std::filesystem::path& file, const Trajectory& traj) {
  std::ofstream out = open_out(file);
  out << "trajectory-dump v1\n";
  out << to_json(traj.config).dump() << '\n';
  out << "stamps " << traj.times.size() << '\n';
  for (std::size_t j = 0; j < traj.times.size(); ++j) {
    out << "t " << format_double(traj.times[j]) << '\n';
    out << "u";
    for (double x : traj.u[j].values()) out << ' ' << format_double(x);
    out << "\npsi";
    for (double x : traj.psi[j].values()) out << ' ' << format_double(x);
    out << '\n';
  }
}

Trajectory load_trajectory(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw config_error("report: cannot open trajectory dump '" + file.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != "trajectory-dump v1")
    throw config_error("report: unrecognized trajectory dump header");
  if (!std::getline(in, line))
    throw config_error("report: trajectory dump is missing its configuration");

  Trajectory traj;
  try {
    traj.config = problem_config_from_json(nlohmann::json::parse(line));
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("report: bad configuration record: ") + e.what());
  }

  std::size_t stamps = 0;
  in >> line >> stamps;
  if (line != "stamps" || stamps == 0)
    throw config_error("report: bad stamp count in trajectory dump");
  const std::size_t n = traj.config.grid.node_count();
  for (std::size_t j = 0; j < stamps; ++j) {
    double t = 0.0;
    in >> line >> t;
    if (line != "t") throw config_error("report: malformed stamp in trajectory dump");
    traj.times.push_back(t);
    in >> line;
    if (line != "u") throw config_error("report: malformed density record");
    ScalarField u(traj.config.grid);
    for (std::size_t i = 0; i < n; ++i) in >> u[i];
    in >> line;
    if (line != "psi") throw config_error("report: malformed potential record");
    ScalarField psi(traj.config.grid);
    for (std::size_t i = 0; i < n; ++i) in >> psi[i];
    if (!in) throw config_error("report: truncated trajectory dump");
    traj.u.push_back(std::move(u));
    traj.psi.push_back(std::move(psi));
  }
  traj.step_stats.assign(stamps - 1, StepStats{});
  return traj;
}

}  // namespace kspe::report
