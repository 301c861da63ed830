// Batch front-end: scenario configs in, reports and plot data out.
//
// Exit codes: 0 all pass-semantics records passed (after expect_fail
// inversion), 2 on record failures, 1 on config or I/O errors.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "steinerlab/check.hpp"
#include "steinerlab/scenario.hpp"
#include "steinerlab/steiner2d.hpp"

namespace {

struct GlobalFlags {
  std::string config;
  std::string out_dir;
  std::string format = "both";
  std::uint64_t seed = 0;
  bool seed_set = false;
};

int run_steps(const GlobalFlags& flags, const std::vector<std::string>& steps) {
  steinerlab::Scenario sc = steinerlab::load_scenario(flags.config);
  if (!flags.out_dir.empty()) sc.out_dir = flags.out_dir;
  if (flags.seed_set) sc.seed = flags.seed;
  if (flags.format == "csv") {
    sc.write_csv = true;
    sc.write_json = false;
  } else if (flags.format == "json") {
    sc.write_csv = false;
    sc.write_json = true;
  }
  steinerlab::ScenarioOutcome outcome = steinerlab::run_scenario(sc, steps);
  std::cout << sc.name << ": " << outcome.passed << "/" << outcome.total
            << " records passed";
  if (outcome.expected_failures > 0) {
    std::cout << " (" << outcome.expected_failures << " expected failures)";
  }
  std::cout << (outcome.ok ? " -> OK" : " -> FAIL") << "\n";
  return outcome.ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"steiner_lab: continuous Steiner symmetrization diagnostics for steady 2D Euler flows"};
  app.require_subcommand(1);

  GlobalFlags flags;
  app.add_option("--config", flags.config, "scenario config (JSON)");
  app.add_option("--out", flags.out_dir, "output directory override");
  auto* seed_opt = app.add_option("--seed", flags.seed, "random seed");
  app.add_option("--format", flags.format, "report format: csv|json|both")
      ->check(CLI::IsMember({"csv", "json", "both"}));

  // symmetrize: one field in, the flowed field out
  auto* sym = app.add_subcommand("symmetrize", "flow one grid field and write u^t");
  std::string sym_in, sym_out_dir = "out";
  double sym_t = 1.0, sym_dx = 1.0, sym_dy = 0.0;
  int sym_levels = 256;
  sym->add_option("--in", sym_in, "input field (.gfield)")->required();
  sym->add_option("--t", sym_t, "flow time (use 'inf' via --to-infinity)")->required();
  sym->add_option("--dir-x", sym_dx, "direction x component");
  sym->add_option("--dir-y", sym_dy, "direction y component");
  sym->add_option("--levels", sym_levels, "level count (K)");

  auto* verify = app.add_subcommand("verify", "rearrangement verifiers");
  auto* euler = app.add_subcommand("euler", "flow diagnostics: residuals, stagnation, symmetry, asymptotics");
  auto* recf = app.add_subcommand("reconstruct-f", "recover the nonlinearity from the Bernoulli function");
  auto* scan = app.add_subcommand("scan", "radius scans");
  std::string scan_kind;
  scan->add_option("--kind", scan_kind, "oscillation|flux|pohozaev|annular")
      ->required()
      ->check(CLI::IsMember({"oscillation", "flux", "pohozaev", "annular"}));
  auto* report = app.add_subcommand("report", "run every step in the scenario config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  flags.seed_set = seed_opt->count() > 0;

  try {
    if (sym->parsed()) {
      steinerlab::GridField field = steinerlab::GridField::load(sym_in);
      steinerlab::SymmetrizationOptions opts;
      opts.levels = sym_levels;
      steinerlab::SymmetrizationResult result =
          steinerlab::symmetrize_function(field, sym_t, sym_dx, sym_dy, opts);
      std::filesystem::path out_dir = flags.out_dir.empty() ? sym_out_dir : flags.out_dir;
      std::filesystem::create_directories(out_dir);
      result.field.save(out_dir / "u_t.gfield");
      std::cout << "wrote " << (out_dir / "u_t.gfield").string()
                << " (t=" << sym_t << ", levels=" << result.levels_used
                << ", gap=" << result.max_level_gap << ")\n";
      return 0;
    }

    if (flags.config.empty()) {
      std::cerr << "error: --config is required for this subcommand\n";
      return 1;
    }
    if (verify->parsed()) {
      return run_steps(flags, {"axioms", "polya", "truncation", "l2", "jderiv",
                               "energy_deriv"});
    }
    if (euler->parsed()) {
      return run_steps(flags, {"euler", "stagnation", "symmetry", "asymptotics",
                               "contours"});
    }
    if (recf->parsed()) return run_steps(flags, {"reconstruct_f"});
    if (scan->parsed()) {
      if (scan_kind == "oscillation") return run_steps(flags, {"oscillation"});
      if (scan_kind == "flux") return run_steps(flags, {"flux"});
      if (scan_kind == "pohozaev") return run_steps(flags, {"pohozaev"});
      return run_steps(flags, {"annular"});
    }
    if (report->parsed()) return run_steps(flags, {});
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
