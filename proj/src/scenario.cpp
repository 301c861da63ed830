#include "steinerlab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "steinerlab/contour.hpp"
#include "steinerlab/euler_lab.hpp"
#include "steinerlab/flow_cases.hpp"
#include "steinerlab/verifiers.hpp"

namespace steinerlab {

namespace {

using nlohmann::json;

[[noreturn]] void fail_at(const std::string& pointer, const std::string& message) {
  throw std::runtime_error("config error at " + pointer + ": " + message);
}

double require_number(const json& j, const std::string& pointer, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) fail_at(pointer + "/" + key, "number required");
  return j[key].get<double>();
}

const std::set<std::string> kKnownSteps = {
    "axioms",   "polya",      "truncation", "l2",       "jderiv",
    "energy_deriv", "euler",  "oscillation", "flux",    "pohozaev",
    "annular",  "reconstruct_f", "contours", "stagnation", "symmetry",
    "asymptotics"};

std::vector<std::pair<double, double>> parse_point_list(const json& arr,
                                                        const std::string& pointer) {
  std::vector<std::pair<double, double>> out;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const json& p = arr[k];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      fail_at(pointer + "/" + std::to_string(k), "expected [x, y]");
    }
    out.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  return out;
}

}  // namespace

Scenario load_scenario(const std::filesystem::path& config_path) {
  std::ifstream in(config_path);
  if (!in) throw std::runtime_error("cannot open config: " + config_path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("config parse error in " + config_path.string() + ": " +
                             e.what());
  }

  Scenario sc;
  sc.name = j.value("name", config_path.stem().string());

  if (!j.contains("case") || !j["case"].is_object()) fail_at("/case", "object required");
  const json& cs = j["case"];
  if (!cs.contains("kind") || !cs["kind"].is_string()) fail_at("/case/kind", "string required");
  sc.case_kind = cs["kind"].get<std::string>();
  const std::set<std::string> kinds = {"gaussian_vortex", "two_bump", "log_unbounded",
                                       "oscillating_counterexample", "from_file"};
  if (!kinds.count(sc.case_kind)) fail_at("/case/kind", "unknown kind " + sc.case_kind);
  if (cs.contains("alpha")) sc.alpha = require_number(cs, "/case", "alpha");
  if (cs.contains("q")) {
    auto q = parse_point_list(json::array({cs["q"]}), "/case/q");
    sc.qx = q[0].first;
    sc.qy = q[0].second;
  }
  if (cs.contains("center")) {
    auto c = parse_point_list(json::array({cs["center"]}), "/case/center");
    sc.center_x = c[0].first;
    sc.center_y = c[0].second;
  }
  if (sc.case_kind == "from_file") {
    if (!cs.contains("grid_path") || !cs["grid_path"].is_string()) {
      fail_at("/case/grid_path", "string required for from_file");
    }
    sc.grid_path = cs["grid_path"].get<std::string>();
    sc.sidecar_path = cs.value("sidecar_path", sc.grid_path + ".json");
  }

  if (j.contains("grid")) {
    sc.half_width = require_number(j["grid"], "/grid", "L");
    sc.n = static_cast<int>(require_number(j["grid"], "/grid", "n"));
  }

  if (j.contains("symmetrization")) {
    const json& sy = j["symmetrization"];
    if (sy.contains("t_list")) {
      sc.t_list.clear();
      for (const auto& t : sy["t_list"]) sc.t_list.push_back(t.get<double>());
    }
    if (sy.contains("s")) sc.s = sy["s"].get<double>();
    if (sy.contains("levels")) sc.levels = sy["levels"].get<int>();
    if (sy.contains("directions")) {
      sc.directions = parse_point_list(sy["directions"], "/symmetrization/directions");
    }
    if (sc.levels < 64) fail_at("/symmetrization/levels", "levels >= 64 required");
  }

  if (j.contains("scans")) {
    const json& sn = j["scans"];
    if (sn.contains("radii")) {
      const json& r = sn["radii"];
      double lo = require_number(r, "/scans/radii", "min");
      double hi = require_number(r, "/scans/radii", "max");
      int count = static_cast<int>(require_number(r, "/scans/radii", "count"));
      if (count < 2 || !(lo < hi)) fail_at("/scans/radii", "need min < max and count >= 2");
      for (int k = 0; k < count; ++k) {
        sc.radii.push_back(lo + (hi - lo) * k / (count - 1));
      }
    }
    if (sn.contains("levels")) {
      for (const auto& c : sn["levels"]) sc.scan_levels.push_back(c.get<double>());
    }
    if (sn.contains("pairs")) sc.pairs = parse_point_list(sn["pairs"], "/scans/pairs");
  }

  if (j.contains("truncation_m")) {
    for (const auto& mv : j["truncation_m"]) sc.truncation_m.push_back(mv.get<double>());
  }
  if (j.contains("l2")) sc.l2_radius = require_number(j["l2"], "/l2", "R");

  if (!j.contains("run") || !j["run"].is_array() || j["run"].empty()) {
    fail_at("/run", "non-empty step array required");
  }
  for (const auto& st : j["run"]) {
    std::string step = st.get<std::string>();
    if (!kKnownSteps.count(step)) fail_at("/run", "unknown step " + step);
    sc.run.push_back(step);
  }

  if (j.contains("expect_fail")) {
    for (const auto& pat : j["expect_fail"]) sc.expect_fail.push_back(pat.get<std::string>());
  }
  if (j.contains("output")) {
    const json& out = j["output"];
    if (out.contains("directory")) sc.out_dir = out["directory"].get<std::string>();
    if (out.contains("formats")) {
      sc.write_csv = sc.write_json = false;
      for (const auto& fmt : out["formats"]) {
        std::string s = fmt.get<std::string>();
        if (s == "csv") sc.write_csv = true;
        else if (s == "json") sc.write_json = true;
        else if (s == "both") sc.write_csv = sc.write_json = true;
        else fail_at("/output/formats", "unknown format " + s);
      }
    }
  }
  if (j.contains("seed")) sc.seed = j["seed"].get<std::uint64_t>();

  const bool needs_grid = sc.case_kind != "oscillating_counterexample";
  const bool euler_steps =
      std::any_of(sc.run.begin(), sc.run.end(), [](const std::string& s) {
        return s == "euler" || s == "pohozaev" || s == "reconstruct_f";
      });
  if (needs_grid && euler_steps && sc.n < 64) {
    fail_at("/grid/n", "n >= 64 required for Euler scenarios");
  }
  return sc;
}

namespace {

bool matches(const std::string& pattern, const std::string& name) {
  if (!pattern.empty() && pattern.back() == '*') {
    return name.rfind(pattern.substr(0, pattern.size() - 1), 0) == 0;
  }
  return pattern == name;
}

FlowCase build_case(const Scenario& sc) {
  if (sc.case_kind == "gaussian_vortex") {
    return make_gaussian_vortex(sc.half_width, sc.n, sc.center_x, sc.center_y);
  }
  if (sc.case_kind == "two_bump") {
    return make_two_bump(sc.qx, sc.qy, sc.half_width, sc.n);
  }
  if (sc.case_kind == "log_unbounded") {
    return make_log_unbounded(sc.alpha, sc.half_width, sc.n);
  }
  if (sc.case_kind == "oscillating_counterexample") {
    return make_oscillating_counterexample(sc.alpha);
  }
  return load_flow_case(sc.grid_path, sc.sidecar_path);
}

std::vector<CheckRecord> contour_records(const GridField& u,
                                         const std::vector<double>& levels) {
  std::vector<CheckRecord> records;
  for (double c : levels) {
    ContourSet cs = extract_contours(u, c);
    CheckRecord closed = CheckRecord::leq(
        "contour.closed[c=" + format_double(c) + "]", cs.all_closed() ? 0.0 : 1.0, 0.0,
        0.0, "Thm 1.1 Step 1");
    closed.metadata["components"] = std::to_string(cs.connected_component_count);
    records.push_back(closed);
    records.push_back(CheckRecord::leq(
        "contour.connected[c=" + format_double(c) + "]",
        static_cast<double>(cs.connected_component_count), 1.0, 0.0, "Thm 1.1 Step 1"));
  }
  return records;
}

}  // namespace

ScenarioOutcome run_scenario(const Scenario& sc, const std::vector<std::string>& only_steps) {
  std::filesystem::create_directories(sc.out_dir);

  std::vector<std::string> steps = sc.run;
  if (!only_steps.empty()) {
    std::vector<std::string> filtered;
    for (const std::string& s : steps) {
      if (std::find(only_steps.begin(), only_steps.end(), s) != only_steps.end()) {
        filtered.push_back(s);
      }
    }
    steps = filtered.empty() ? only_steps : filtered;
  }

  FlowCase flow = build_case(sc);
  ScenarioOutcome outcome;
  auto& records = outcome.records;

  auto grid_of = [&flow](const std::string& step) -> const GridField& {
    if (!flow.u.has_value()) {
      throw std::runtime_error("step '" + step + "' needs a case with a 2D grid");
    }
    return *flow.u;
  };

  auto default_radii = [&]() {
    std::vector<double> radii = sc.radii;
    if (radii.empty() && flow.u.has_value()) {
      double r_hi = flow.u->half_width() - 3.0 * flow.u->spacing();
      for (int k = 1; k <= 14; ++k) radii.push_back(r_hi * k / 14.0);
    }
    return radii;
  };
  auto default_levels = [&]() {
    std::vector<double> levels = sc.scan_levels;
    if (levels.empty() && flow.u.has_value()) {
      double floor_value = flow.u->boundary_ring_mean();
      double umax = flow.u->max_value();
      for (int k = 1; k <= 9; ++k) {
        levels.push_back(floor_value + (umax - floor_value) * k / 10.0);
      }
    }
    return levels;
  };

  for (const std::string& step : steps) {
    if (step == "axioms") {
      auto recs = verify_rearrangement_axioms(grid_of(step), sc.t_list.front(), sc.s,
                                              default_levels(), sc.levels,
                                              flow.has_F() ? flow.F : nullptr, sc.seed);
      records.insert(records.end(), recs.begin(), recs.end());
    } else if (step == "polya") {
      for (double t : sc.t_list) {
        for (auto [dx, dy] : sc.directions) {
          CheckRecord rec = verify_polya_szego(grid_of(step), t, sc.levels, dx, dy);
          rec.name += "[t=" + format_double(t) + "]";
          records.push_back(rec);
        }
      }
    } else if (step == "truncation") {
      for (double mv : sc.truncation_m) {
        auto recs = verify_truncation_algebra(grid_of(step), mv, sc.t_list.front(), sc.levels);
        for (CheckRecord& r : recs) {
          r.name += "[m=" + format_double(mv) + "]";
          records.push_back(std::move(r));
        }
      }
    } else if (step == "l2") {
      if (sc.l2_radius > 0.0) {
        for (double t : sc.t_list) {
          CheckRecord rec = verify_l2_continuity(grid_of(step), t, sc.l2_radius, sc.levels);
          rec.name += "[t=" + format_double(t) + "]";
          records.push_back(rec);
        }
      }
    } else if (step == "jderiv") {
      auto recs = j_derivative_test(flow, sc.t_list, sc.directions.front().first,
                                    sc.directions.front().second, sc.levels);
      records.insert(records.end(), recs.begin(), recs.end());
    } else if (step == "energy_deriv") {
      records.push_back(energy_derivative_test(grid_of(step), sc.t_list, sc.directions, true,
                                               std::max(sc.levels, 512)));
    } else if (step == "euler") {
      FlowDiagnostics diag = run_euler_diagnostics(flow);
      records.insert(records.end(), diag.records.begin(), diag.records.end());
      CheckRecord energy = CheckRecord::info("euler.energy", diag.energy, "finite energy");
      records.push_back(energy);
    } else if (step == "oscillation") {
      OscillationScan scan = oscillation_scan(grid_of(step), default_radii());
      records.push_back(scan.record);
      std::vector<std::pair<double, double>> series;
      for (std::size_t k = 0; k < scan.radii.size(); ++k) {
        series.emplace_back(scan.radii[k], scan.oscillation[k]);
      }
      write_text_file(sc.out_dir / "oscillation.csv", series_to_csv("R", "oscillation", series));
    } else if (step == "flux") {
      BoundaryScan scan = boundary_scan(grid_of(step), grid_of(step), default_radii());
      records.insert(records.end(), scan.records.begin(), scan.records.end());
      write_text_file(sc.out_dir / "flux.csv",
                      series_to_csv("R", "RlogR_flux", scan.flux_series));
    } else if (step == "pohozaev") {
      PohozaevScan scan = pohozaev_scan(flow, default_radii());
      records.insert(records.end(), scan.records.begin(), scan.records.end());
      write_text_file(sc.out_dir / "pohozaev_psi.csv",
                      series_to_csv("R", "Psi", scan.psi_series));
      write_text_file(sc.out_dir / "pohozaev_residual.csv",
                      series_to_csv("R", "residual", scan.residual_series));
    } else if (step == "annular") {
      std::vector<std::pair<double, double>> pairs = sc.pairs;
      if (pairs.empty() && flow.u.has_value()) {
        double r_hi = flow.u->half_width() - 3.0 * flow.u->spacing();
        pairs = {{0.25 * r_hi, 0.5 * r_hi}, {0.5 * r_hi, 0.9 * r_hi}};
      }
      auto recs = annular_mean_check(grid_of(step), pairs);
      records.insert(records.end(), recs.begin(), recs.end());
    } else if (step == "reconstruct_f") {
      if (!flow.has_F()) throw std::runtime_error("reconstruct_f step needs a case with F");
      FlowFields fields = derive_fields(flow);
      FReconstruction rec = reconstruct_f(grid_of(step), fields.bernoulli, default_levels());
      records.insert(records.end(), rec.records.begin(), rec.records.end());
      write_text_file(sc.out_dir / "f_table.csv", series_to_csv("c", "f", rec.f_table));
    } else if (step == "contours") {
      auto recs = contour_records(grid_of(step), default_levels());
      records.insert(records.end(), recs.begin(), recs.end());
    } else if (step == "stagnation") {
      VectorFieldGrid v = perp_gradient(grid_of(step));
      StagnationAnalysis stag = stagnation_analysis(v);
      CheckRecord rec = CheckRecord::leq("stagnation.connected",
                                         std::abs(stag.components - 1.0), 0.0, 0.0,
                                         "Thm 1.1 (A1)/(A2)");
      rec.metadata["components"] = std::to_string(stag.components);
      rec.metadata["whole_plane"] = stag.whole_plane ? "true" : "false";
      records.push_back(rec);
    } else if (step == "symmetry") {
      VectorFieldGrid v = perp_gradient(grid_of(step));
      LocalSymmetry sym = local_symmetry_detect(grid_of(step), v);
      CheckRecord rec = CheckRecord::leq(
          "symmetry.radial", sym.classification == SymmetryClass::radial ? 0.0 : 1.0,
          0.0, 0.0, "Thm main: circular flow");
      rec.metadata["classification"] = to_string(sym.classification);
      rec.metadata["center"] =
          format_double(sym.center_x) + "," + format_double(sym.center_y);
      records.push_back(rec);
    } else if (step == "asymptotics") {
      AsymptoticsReport rep = asymptotics_report(flow);
      records.insert(records.end(), rep.records.begin(), rep.records.end());
    }
  }

  // expect_fail inversion and summary
  sort_records(records);
  for (const CheckRecord& rec : records) {
    bool expected_fail = std::any_of(sc.expect_fail.begin(), sc.expect_fail.end(),
                                     [&](const std::string& p) { return matches(p, rec.name); });
    ++outcome.total;
    bool effective_ok = rec.passed != expected_fail;
    if (rec.passed) ++outcome.passed;
    if (expected_fail && !rec.passed) ++outcome.expected_failures;
    if (!effective_ok) ++outcome.failed;
  }
  outcome.ok = outcome.failed == 0;

  if (sc.write_csv) {
    write_text_file(sc.out_dir / "records.csv", records_to_csv(records));
  }
  if (sc.write_json) {
    nlohmann::ordered_json report;
    report["name"] = sc.name;
    report["seed"] = sc.seed;
    report["summary"] = {{"total", outcome.total},
                         {"passed", outcome.passed},
                         {"failed", outcome.failed},
                         {"expected_failures", outcome.expected_failures},
                         {"ok", outcome.ok}};
    report["records"] = nlohmann::ordered_json::parse(records_to_json(records));
    write_text_file(sc.out_dir / "report.json", report.dump(2) + "\n");
  }
  return outcome;
}

}  // namespace steinerlab
