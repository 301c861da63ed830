#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "oracles.hpp"
#include "steinerlab/flow_cases.hpp"
#include "steinerlab/grid_ops.hpp"

using namespace steinerlab;

TEST_CASE("gaussian vortex: closed forms at the stagnation point") {
  FlowCase flow = make_gaussian_vortex(8.0, 257);
  CHECK(flow.f(1.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(flow.F(1.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(flow.analytic_refs.at("energy") == doctest::Approx(std::numbers::pi));

  // discrete laplacian at the origin matches -f(1)
  GridField lap = laplacian(*flow.u);
  const double h = flow.u->spacing();
  CHECK(lap(128, 128) == doctest::Approx(-2.0).epsilon(4.0 * h * h));
}

TEST_CASE("gaussian vortex: derived fields") {
  FlowCase flow = make_gaussian_vortex(8.0, 257);
  FlowFields fields = derive_fields(flow);

  // B(0) = -F(1) = -1/2
  CHECK(fields.bernoulli(128, 128) == doctest::Approx(-0.5).epsilon(1e-12));

  // |v| = r e^{-r^2/2} peaks at r = 1 with value e^{-1/2}
  double vmax = 0.0;
  double rx = 0.0, ry = 0.0;
  for (int j = 0; j < 257; ++j) {
    for (int i = 0; i < 257; ++i) {
      double mag = fields.v.magnitude(i, j);
      if (mag > vmax) {
        vmax = mag;
        rx = fields.v.x.x(i);
        ry = fields.v.x.y(j);
      }
    }
  }
  const double h = flow.u->spacing();
  CHECK(vmax == doctest::Approx(std::exp(-0.5)).epsilon(1e-3));
  CHECK(std::hypot(rx, ry) == doctest::Approx(1.0).epsilon(2.0 * h));

  // pointwise identity B - p - |v|^2/2 = 0 holds by construction
  for (std::size_t k = 0; k < fields.bernoulli.values().size(); k += 97) {
    double speed2 = fields.v.x.values()[k] * fields.v.x.values()[k] +
                    fields.v.y.values()[k] * fields.v.y.values()[k];
    CHECK(std::abs(fields.bernoulli.values()[k] - fields.pressure.values()[k] -
                   0.5 * speed2) <= 1e-15);
  }
}

TEST_CASE("derive_fields requires a primitive") {
  FlowCase bump = make_two_bump(2.0, 0.0, 8.0, 257);
  CHECK_FALSE(bump.has_F());
  CHECK_THROWS_AS(derive_fields(bump), std::invalid_argument);
}

TEST_CASE("radial ODE solver reproduces the Gaussian profile") {
  FlowCase gauss = make_gaussian_vortex(8.0, 257);
  FlowCase ode = make_radial_from_f(gauss.f, 1.0, 4.0, 129);
  for (double r = 0.0; r <= 4.0; r += 0.37) {
    CHECK(std::abs(ode.radial_u(r) - std::exp(-0.5 * r * r)) <= 1e-5);
  }
  // the sampled grid agrees too
  for (int i = 64; i < 129; i += 7) {
    double x = ode.u->x(i);
    CHECK(std::abs((*ode.u)(i, 64) - std::exp(-0.5 * x * x)) <= 1e-5);
  }
}

TEST_CASE("radial ODE solver flags blow-up") {
  auto runaway = [](double w) { return -50.0 * (w * w + 1.0); };
  CHECK_THROWS_AS(make_radial_from_f(runaway, 1.0, 8.0, 129), std::runtime_error);
}

TEST_CASE("oscillating counterexample: closed-form critical circles") {
  const double alpha = 0.4;
  FlowCase flow = make_oscillating_counterexample(alpha);
  REQUIRE(flow.stagnation_radii.size() == 3);
  for (int k = 1; k <= 3; ++k) {
    double closed = std::sqrt(std::exp(std::pow(k * std::numbers::pi, 1.0 / alpha)) - 2.0);
    double got = flow.stagnation_radii[k - 1];
    CHECK(std::abs(got - closed) <= 1e-10 * closed);
    double expected = (k % 2 == 1) ? -1.0 : 1.0;
    CHECK(std::abs(flow.radial_u(got) - expected) <= 1e-6);
  }
  CHECK(flow.stagnation_radii[0] == doctest::Approx(6.2900e3).epsilon(1e-3));
  CHECK(flow.limit_none);
  CHECK_THROWS_AS(make_oscillating_counterexample(0.7), std::invalid_argument);
}

TEST_CASE("log-unbounded case: slope closed form") {
  const double alpha = 0.4;
  FlowCase flow = make_log_unbounded(alpha, 8.0, 257);
  CHECK(flow.limit_minus_inf);
  for (double r : {1.0, 3.0, 6.0}) {
    double g = std::log(2.0 + r * r);
    double expected = -alpha * std::pow(g, alpha - 1.0) * 2.0 * r / (2.0 + r * r);
    CHECK(flow.radial_du(r) == doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK_THROWS_AS(make_log_unbounded(0.5, 8.0, 257), std::invalid_argument);
}

TEST_CASE("flow case file round trip with an f table") {
  namespace fs = std::filesystem;
  FlowCase gauss = make_gaussian_vortex(4.0, 65);
  fs::path dir = fs::temp_directory_path() / "steinerlab_test_case";
  fs::create_directories(dir);
  gauss.u->save(dir / "u.gfield");

  nlohmann::json table = nlohmann::json::array();
  for (double c = 0.05; c <= 1.0001; c += 0.05) {
    table.push_back({c, gauss.f(c)});
  }
  nlohmann::json sidecar = {
      {"name", "gaussian_from_file"},
      {"L_expected", 0.0},
      {"H_ball", 3.0},
      {"f_table", table},
  };
  std::ofstream(dir / "u.gfield.json") << sidecar.dump(2);

  FlowCase loaded = load_flow_case(dir / "u.gfield", dir / "u.gfield.json");
  CHECK(loaded.name == "gaussian_from_file");
  CHECK(loaded.limit_known);
  CHECK(loaded.hypothesis_H_ball.value() == doctest::Approx(3.0));
  for (double c : {0.2, 0.5, 0.8}) {
    CHECK(loaded.f(c) == doctest::Approx(gauss.f(c)).epsilon(2e-3));
  }
  // the table-integrated primitive matches F up to the anchor offset
  double offset = loaded.F(0.5) - gauss.F(0.5);
  CHECK(loaded.F(0.9) - gauss.F(0.9) == doctest::Approx(offset).epsilon(1e-2));
  fs::remove_all(dir);
}

TEST_CASE("euler residuals: exact solution, shear flow, perturbed control") {
  SUBCASE("gaussian vortex satisfies both systems to O(h^2)") {
    FlowCase flow = make_gaussian_vortex(8.0, 513);
    FlowFields fields = derive_fields(flow);
    auto records =
        euler_residuals(fields.v, fields.pressure, fields.omega, fields.bernoulli);
    REQUIRE(records.size() == 3);
    for (const CheckRecord& rec : records) {
      INFO(rec.name, " lhs=", rec.lhs, " tol=", rec.tolerance);
      CHECK(rec.passed);
    }
  }

  SUBCASE("constant shear flow gives exactly zero residuals") {
    GridField one = GridField::from_function(4.0, 65, [](double, double) { return 1.0; });
    GridField zero(4.0, 65);
    VectorFieldGrid v(one, zero);
    GridField B = GridField::from_function(4.0, 65, [](double, double) { return 0.5; });
    auto records = euler_residuals(v, zero, zero, B);
    for (const CheckRecord& rec : records) CHECK(rec.lhs == 0.0);
  }

  SUBCASE("perturbed stream function is detected") {
    FlowCase flow = make_gaussian_vortex(8.0, 257);
    GridField u = *flow.u;
    for (int j = 0; j < u.size(); ++j) {
      for (int i = 0; i < u.size(); ++i) {
        u(i, j) += 0.05 * std::sin(9.0 * u.x(i)) * std::sin(7.0 * u.y(j));
      }
    }
    FlowCase wrecked = flow;
    wrecked.u = u;
    FlowFields fields = derive_fields(wrecked);
    auto records =
        euler_residuals(fields.v, fields.pressure, fields.omega, fields.bernoulli);
    CHECK_FALSE(records[0].passed);  // momentum residual blows up
  }
}
