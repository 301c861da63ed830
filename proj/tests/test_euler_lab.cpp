#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "oracles.hpp"
#include "steinerlab/euler_lab.hpp"
#include "steinerlab/verifiers.hpp"

using namespace steinerlab;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> out;
  for (int k = 0; k < count; ++k) out.push_back(lo + (hi - lo) * k / (count - 1));
  return out;
}

const CheckRecord& find_record(const std::vector<CheckRecord>& records,
                               const std::string& name) {
  for (const CheckRecord& rec : records) {
    if (rec.name == name) return rec;
  }
  throw std::runtime_error("record not found: " + name);
}

}  // namespace

TEST_CASE("oscillation scan: radial pass, linear negative control, decaying bump") {
  FlowCase gauss = make_gaussian_vortex(8.0, 513);
  OscillationScan scan = oscillation_scan(*gauss.u, linspace(0.5, 7.0, 14));
  CHECK(scan.record.passed);
  for (double osc : scan.oscillation) CHECK(osc <= 1e-3);

  GridField lin = GridField::from_function(8.0, 513, [](double x, double) { return x; });
  OscillationScan bad = oscillation_scan(lin, linspace(0.5, 7.0, 14));
  CHECK_FALSE(bad.record.passed);
  for (std::size_t k = 0; k < bad.radii.size(); ++k) {
    CHECK(bad.oscillation[k] == doctest::Approx(2.0 * bad.radii[k]).epsilon(1e-2));
  }

  GridField bump = GridField::from_function(8.0, 513, [](double x, double y) {
    return std::exp(-((x - 1.0) * (x - 1.0) + y * y));
  });
  OscillationScan dec = oscillation_scan(bump, linspace(0.5, 7.0, 14));
  CHECK(dec.record.passed);
  CHECK(dec.oscillation.back() <= 1e-3);
}

TEST_CASE("boundary scan: Green identity and flux sequence") {
  FlowCase gauss = make_gaussian_vortex(8.0, 1025);
  const GridField& u = *gauss.u;
  GridField one = GridField::from_function(8.0, 1025, [](double, double) { return 1.0; });
  auto radii = linspace(1.0, 7.0, 7);

  SUBCASE("phi = 1 recovers the vanishing total vorticity") {
    BoundaryScan scan = boundary_scan(u, one, radii);
    CHECK(find_record(scan.records, "boundary.green_identity").passed);
    CHECK(find_record(scan.records, "boundary.flux_running_min").passed);

    // residual of int_{B(R)} (-lap u) dx = -boundary flux, directly
    GridField neg_lap = laplacian(u);
    for (double& v : neg_lap.values()) v = -v;
    const double norm_l1 = [&] {
      GridField a = neg_lap;
      for (double& v : a.values()) v = std::abs(v);
      return integrate(a);
    }();
    VectorFieldGrid gu = gradient(u);
    for (double R : radii) {
      double ball = integrate(neg_lap, Region::ball(R));
      int m = 4096;
      double flux = 0.0;
      for (int k = 0; k < m; ++k) {
        double th = 2.0 * kPi * k / m;
        double cs = std::cos(th), sn = std::sin(th);
        flux += gu.x.sample(R * cs, R * sn) * cs + gu.y.sample(R * cs, R * sn) * sn;
      }
      flux *= 2.0 * kPi * R / m;
      CHECK(std::abs(ball + flux) <= 1e-3 * norm_l1);
    }
    // the boundary term itself decays: 2 pi R u'(R) at R = 7
    CHECK(std::abs(2.0 * kPi * 7.0 * (-7.0 * std::exp(-24.5))) <= 1e-8);
  }

  SUBCASE("phi = u reduces to 1D quadrature") {
    BoundaryScan scan = boundary_scan(u, u, radii);
    CHECK(find_record(scan.records, "boundary.green_identity").passed);
    CHECK(find_record(scan.records, "boundary.phi2_growth").passed);

    // 1D oracles for the three Green-identity terms over B(R), R = 3:
    const double R = 3.0;
    auto uu = [](double r) { return std::exp(-0.5 * r * r); };
    auto lap_u = [](double r) { return (r * r - 2.0) * std::exp(-0.5 * r * r); };
    auto du = [](double r) { return -r * std::exp(-0.5 * r * r); };
    double term_lhs = oracles::adaptive_simpson(
        [&](double r) { return -lap_u(r) * uu(r) * 2.0 * kPi * r; }, 0.0, R);
    double term_dot = oracles::adaptive_simpson(
        [&](double r) { return du(r) * du(r) * 2.0 * kPi * r; }, 0.0, R);
    double term_boundary = uu(R) * du(R) * 2.0 * kPi * R;
    CHECK(std::abs(term_lhs - (term_dot - term_boundary)) <= 1e-10);

    GridField neg_lap_u(u.half_width(), u.size());
    GridField dot(u.half_width(), u.size());
    GridField lap = laplacian(u);
    VectorFieldGrid gu = gradient(u);
    for (std::size_t k = 0; k < u.values().size(); ++k) {
      neg_lap_u.values()[k] = -lap.values()[k] * u.values()[k];
      dot.values()[k] = gu.x.values()[k] * gu.x.values()[k] +
                        gu.y.values()[k] * gu.y.values()[k];
    }
    CHECK(integrate(neg_lap_u, Region::ball(R)) ==
          doctest::Approx(term_lhs).epsilon(1e-3));
    CHECK(integrate(dot, Region::ball(R)) == doctest::Approx(term_dot).epsilon(1e-3));
  }

  SUBCASE("linear field never develops a decreasing flux minimum") {
    GridField lin = GridField::from_function(8.0, 257, [](double x, double) { return x; });
    BoundaryScan scan = boundary_scan(lin, lin, linspace(1.5, 7.0, 10));
    CHECK_FALSE(find_record(scan.records, "boundary.flux_running_min").passed);
  }
}

TEST_CASE("annular mean inequality") {
  SUBCASE("constant field: equality at zero") {
    GridField c = GridField::from_function(8.0, 257, [](double, double) { return 2.5; });
    auto records = annular_mean_check(c, {{1.0, 2.0}, {2.0, 4.0}});
    for (const CheckRecord& rec : records) {
      CHECK(rec.passed);
      CHECK(rec.lhs <= 1e-9);
    }
  }
  SUBCASE("gaussian and linear fields obey the bound") {
    FlowCase gauss = make_gaussian_vortex(8.0, 513);
    for (const CheckRecord& rec :
         annular_mean_check(*gauss.u, {{1.0, 2.0}, {2.0, 4.0}})) {
      CHECK(rec.passed);
    }
    GridField lin = GridField::from_function(8.0, 513, [](double x, double) { return x; });
    for (const CheckRecord& rec : annular_mean_check(lin, {{1.0, 2.0}, {2.0, 4.0}})) {
      CHECK(rec.passed);
    }
  }
  SUBCASE("degenerate pair is rejected") {
    GridField c = GridField::from_function(8.0, 257, [](double, double) { return 1.0; });
    CHECK_THROWS_AS(annular_mean_check(c, {{2.0, 1.0}}), std::invalid_argument);
  }
}

TEST_CASE("pohozaev scan: decay, identity, and the wrong-constant control") {
  FlowCase gauss = make_gaussian_vortex(8.0, 513);
  auto radii = linspace(1.0, 7.0, 13);

  PohozaevScan scan = pohozaev_scan(gauss, radii);
  CHECK(find_record(scan.records, "pohozaev.identity").passed);
  CHECK(find_record(scan.records, "pohozaev.psi_decay").passed);
  CHECK(find_record(scan.records, "pohozaev.calibration").passed);

  // Psi(R) = pi/2 e^{-R^2} R^2 analytically: tiny already at R = 3
  for (const auto& [R, psi] : scan.psi_series) {
    double exact = 0.5 * kPi * R * R * std::exp(-R * R);
    CHECK(std::abs(psi - exact) <= 1e-3);
  }

  // shifting F by +1 plants int_{B(R)} 1 = pi R^2 into Psi
  FlowCase wrong = gauss;
  auto F0 = gauss.F;
  wrong.F = [F0](double w) { return F0(w) + 1.0; };
  PohozaevScan control = pohozaev_scan(wrong, radii);
  CHECK(control.ell == doctest::Approx(kPi).epsilon(0.02));
  CHECK_FALSE(find_record(control.records, "pohozaev.calibration").passed);

  FlowCase no_f = make_two_bump(2.0, 0.0, 8.0, 129);
  CHECK_THROWS_AS(pohozaev_scan(no_f, radii), std::invalid_argument);
}

TEST_CASE("stagnation analysis") {
  SUBCASE("gaussian vortex: one component, stable under tolerance halving") {
    FlowCase gauss = make_gaussian_vortex(8.0, 513);
    VectorFieldGrid v = perp_gradient(*gauss.u);
    StagnationAnalysis stag = stagnation_analysis(v);
    CHECK(stag.components == 1);
    CHECK(stag.connected);
    StagnationAnalysis half = stagnation_analysis(v, 0.5 * stag.tol_v);
    CHECK(half.components == 1);
  }
  SUBCASE("two bumps: multiple interior components") {
    FlowCase bump = make_two_bump(2.0, 0.0, 8.0, 513);
    VectorFieldGrid v = perp_gradient(*bump.u);
    StagnationAnalysis stag = stagnation_analysis(v);
    CHECK(stag.components >= 2);
    CHECK_FALSE(stag.connected);
  }
  SUBCASE("zero velocity flags the whole-plane case") {
    GridField zero(4.0, 65);
    VectorFieldGrid v(zero, zero);
    StagnationAnalysis stag = stagnation_analysis(v);
    CHECK(stag.whole_plane);
    CHECK(stag.components == 1);
  }
}

TEST_CASE("f reconstruction from the Bernoulli function") {
  FlowCase gauss = make_gaussian_vortex(8.0, 513);
  FlowFields fields = derive_fields(gauss);

  SUBCASE("gaussian vortex: 2% sup accuracy against the analytic nonlinearity") {
    FReconstruction rec = reconstruct_f(*gauss.u, fields.bernoulli,
                                        linspace(0.05, 0.95, 19));
    double worst = 0.0;
    for (const auto& [c, fv] : rec.f_table) {
      if (c < 0.1 || c > 0.9) continue;
      worst = std::max(worst, std::abs(fv - gauss.f(c)));
    }
    CHECK(worst <= 0.02 * 2.0);  // max |f| = f(1) = 2
    const double h = gauss.u->spacing();
    CHECK(rec.f_at_max == doctest::Approx(2.0).epsilon(10.0 * h * h));
    for (const CheckRecord& r : rec.records) {
      INFO(r.name, " lhs=", r.lhs, " tol=", r.tolerance);
      CHECK(r.passed);
    }
  }

  SUBCASE("two-bump control: disconnected contours between saddle and peak") {
    FlowCase bump = make_two_bump(2.0, 0.0, 8.0, 513);
    GridField zeroB(8.0, 513);
    FReconstruction rec = reconstruct_f(*bump.u, zeroB, linspace(0.2, 0.8, 5));
    int disconnected = 0;
    for (const CheckRecord& r : rec.records) {
      if (r.name.rfind("freconstruct.connected", 0) == 0 && !r.passed) ++disconnected;
    }
    CHECK(disconnected == 5);
  }

  SUBCASE("levels outside the range are rejected") {
    CHECK_THROWS_AS(reconstruct_f(*gauss.u, fields.bernoulli, {0.5, 1.5}),
                    std::invalid_argument);
  }
}

TEST_CASE("local symmetry detection") {
  SUBCASE("centered vortex is radial about the origin") {
    FlowCase gauss = make_gaussian_vortex(8.0, 513);
    VectorFieldGrid v = perp_gradient(*gauss.u);
    LocalSymmetry sym = local_symmetry_detect(*gauss.u, v);
    CHECK(sym.classification == SymmetryClass::radial);
    const double h = gauss.u->spacing();
    CHECK(std::abs(sym.center_x) <= h);
    CHECK(std::abs(sym.center_y) <= h);
    CHECK(sym.annuli.size() == 1);
  }
  SUBCASE("translated vortex recovers its center") {
    FlowCase gauss = make_gaussian_vortex(8.0, 513, 0.7, -0.3);
    VectorFieldGrid v = perp_gradient(*gauss.u);
    LocalSymmetry sym = local_symmetry_detect(*gauss.u, v);
    CHECK(sym.classification == SymmetryClass::radial);
    const double h = gauss.u->spacing();
    CHECK(std::abs(sym.center_x - 0.7) <= h);
    CHECK(std::abs(sym.center_y + 0.3) <= h);
  }
  SUBCASE("two bumps are nonradial") {
    FlowCase bump = make_two_bump(2.0, 0.0, 8.0, 513);
    VectorFieldGrid v = perp_gradient(*bump.u);
    CHECK(local_symmetry_detect(*bump.u, v).classification == SymmetryClass::nonradial);
  }
}

TEST_CASE("asymptotics report") {
  SUBCASE("gaussian vortex: all far-field records pass") {
    FlowCase gauss = make_gaussian_vortex(8.0, 513);
    AsymptoticsReport rep = asymptotics_report(gauss);
    CHECK(rep.limit_flag == AsymptoticsReport::LimitFlag::finite);
    CHECK(std::abs(rep.limit_estimate.value()) <= 1e-4);
    for (const CheckRecord& rec : rep.records) {
      INFO(rec.name, " lhs=", rec.lhs, " tol=", rec.tolerance);
      CHECK(rec.passed);
    }
  }
  SUBCASE("log-unbounded case flags -inf and matches the flux closed form") {
    FlowCase logcase = make_log_unbounded(0.4, 8.0, 513);
    AsymptoticsReport rep = asymptotics_report(logcase);
    CHECK(rep.limit_flag == AsymptoticsReport::LimitFlag::minus_inf);
    CHECK(find_record(rep.records, "asym.flux_identity").passed);
    CHECK(find_record(rep.records, "asym.flux_decreasing").passed);
  }
  SUBCASE("oscillating counterexample: no limit, convergent energy tail measured") {
    FlowCase osc = make_oscillating_counterexample(0.4);
    AsymptoticsReport rep = asymptotics_report(osc);
    CHECK(rep.limit_flag == AsymptoticsReport::LimitFlag::none);
    for (int k = 1; k <= 3; ++k) {
      CHECK(find_record(rep.records, "asym.critical_circle[k=" + std::to_string(k) + "]")
                .passed);
    }
    // The independent quadrature puts the last-decade energy share at ~3.2%,
    // far above the 1e-3 target this record insists on, so it fails by
    // construction; assert the measured ratio to keep the number pinned.
    const CheckRecord& tail = find_record(rep.records, "asym.energy_tail");
    CHECK_FALSE(tail.passed);
    double total = std::stod(tail.metadata.at("total_energy"));
    double tail_energy = std::stod(tail.metadata.at("tail_energy"));
    CHECK(tail_energy / total == doctest::Approx(0.0323).epsilon(0.05));
  }
}

TEST_CASE("euler diagnostics bundle") {
  FlowCase gauss = make_gaussian_vortex(8.0, 513);
  FlowDiagnostics diag = run_euler_diagnostics(gauss);
  CHECK(diag.energy == doctest::Approx(kPi).epsilon(0.005));
  CHECK(std::abs(diag.total_vorticity) <= 1e-2);
  CHECK(diag.stagnation_components == 1);
  CHECK(diag.limit_estimate.has_value());
}
