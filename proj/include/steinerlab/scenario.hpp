#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "steinerlab/check.hpp"

namespace steinerlab {

/// Batch scenario: a flow case, grid, symmetrization parameters, scan
/// specifications, the steps to run, and output options.  Loaded from JSON;
/// see configs/scenario.schema.json for the shape.
struct Scenario {
  std::string name;

  // case
  std::string case_kind;  // gaussian_vortex | two_bump | log_unbounded |
                          // oscillating_counterexample | from_file
  double alpha = 0.4;
  double qx = 2.0, qy = 0.0;
  double center_x = 0.0, center_y = 0.0;
  std::string grid_path;
  std::string sidecar_path;

  // grid
  double half_width = 8.0;
  int n = 257;

  // symmetrization
  std::vector<double> t_list{0.5};
  double s = 0.2;
  std::vector<std::pair<double, double>> directions{{1.0, 0.0}};
  int levels = 256;

  // scans
  std::vector<double> radii;
  std::vector<double> scan_levels;
  std::vector<std::pair<double, double>> pairs;
  std::vector<double> truncation_m;
  double l2_radius = 0.0;  // 0 = skip

  std::vector<std::string> run;  // step names
  std::vector<std::string> expect_fail;

  std::filesystem::path out_dir = "out";
  bool write_csv = true;
  bool write_json = true;

  std::uint64_t seed = 0;
};

/// Parse + validate.  Throws std::runtime_error with a JSON-pointer-anchored
/// message on schema violations.
Scenario load_scenario(const std::filesystem::path& config_path);

struct ScenarioOutcome {
  std::vector<CheckRecord> records;
  int total = 0;
  int passed = 0;
  int failed = 0;            // effective failures after expect_fail inversion
  int expected_failures = 0; // records that failed as designed
  bool ok = false;
};

/// Execute the scenario (optionally restricted to a subset of its steps) and
/// write report.json / records.csv / per-scan plot CSVs under out_dir.
ScenarioOutcome run_scenario(const Scenario& config,
                             const std::vector<std::string>& only_steps = {});

}  // namespace steinerlab
