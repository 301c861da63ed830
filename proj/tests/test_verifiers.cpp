#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "oracles.hpp"
#include "steinerlab/flow_cases.hpp"
#include "steinerlab/verifiers.hpp"

using namespace steinerlab;

namespace {

GridField shifted_bump(double L, int n, double cx, double cy = 0.0) {
  return GridField::from_function(L, n, [=](double x, double y) {
    double dx = x - cx, dy = y - cy;
    return std::exp(-(dx * dx + dy * dy));
  });
}

GridField compact_bump(double L, int n, double cx) {
  return GridField::from_function(L, n, [=](double x, double y) {
    double rho2 = (x - cx) * (x - cx) + y * y;
    double w = std::max(0.0, 1.0 - rho2);
    return w * w;
  });
}

}  // namespace

TEST_CASE("rearrangement axioms pass on bump fields") {
  SUBCASE("centered radial bump") {
    GridField u = shifted_bump(4.0, 257, 0.0);
    auto records =
        verify_rearrangement_axioms(u, 0.3, 0.2, {0.2, 0.5, 0.8}, 256, nullptr, 11);
    for (const CheckRecord& rec : records) {
      INFO(rec.name, ": lhs=", rec.lhs, " tol=", rec.tolerance);
      CHECK(rec.passed);
    }
  }
  SUBCASE("shifted bump with the Cavalieri oracle") {
    GridField u = shifted_bump(4.0, 257, 1.0);
    auto records =
        verify_rearrangement_axioms(u, 0.5, 0.25, {0.2, 0.5, 0.8}, 256, nullptr, 5);
    for (const CheckRecord& rec : records) {
      INFO(rec.name, ": lhs=", rec.lhs, " tol=", rec.tolerance);
      CHECK(rec.passed);
    }
    // int u^2 = int e^{-2 r^2} = pi/2, preserved by the flow
    double expected = oracles::radial_integral(
        [](double r) { return std::exp(-2.0 * r * r); }, 10.0);
    CHECK(expected == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-10));
    SymmetrizationResult ut = symmetrize_function(u, 0.5);
    GridField sq(u.half_width(), u.size());
    for (std::size_t k = 0; k < u.values().size(); ++k) {
      double w = ut.field.values()[k];
      sq.values()[k] = w * w;
    }
    CHECK(integrate(sq) == doctest::Approx(expected).epsilon(0.01));
  }
}

TEST_CASE("polya-szego: translation equality, two-bump strict decrease") {
  SUBCASE("t = 0 compares the field with itself") {
    GridField u = shifted_bump(4.0, 129, 0.7);
    CheckRecord rec = verify_polya_szego(u, 0.0, 256);
    CHECK(rec.lhs == rec.rhs);
    CHECK(rec.passed);
  }
  SUBCASE("shifted bump: energies within 1%") {
    GridField u = shifted_bump(4.0, 257, 1.0);
    for (double t : {0.5, 2.0}) {
      CheckRecord rec = verify_polya_szego(u, t, 256);
      CHECK(rec.passed);
      CHECK(std::abs(rec.lhs - rec.rhs) <= 0.01 * rec.rhs);
    }
  }
  SUBCASE("two bumps merge and lose energy") {
    // L = 6 keeps the lowest superlevel compactly inside the grid
    GridField u = GridField::from_function(6.0, 385, [](double x, double y) {
      return std::exp(-((x - 2) * (x - 2) + y * y)) +
             std::exp(-((x + 2) * (x + 2) + y * y));
    });
    CheckRecord rec = verify_polya_szego(u, 2.0, 256);
    CHECK(rec.passed);
    CHECK(rec.lhs <= 0.95 * rec.rhs);  // >= 5% strict decrease
  }
}

TEST_CASE("L2 continuity bound") {
  const double R = 4.0;
  GridField u = compact_bump(4.0, 257, 0.5);

  SUBCASE("shifted compact bump at several times") {
    for (double t : {0.01, 0.1, 0.5}) {
      CheckRecord rec = verify_l2_continuity(u, t, R, 256);
      INFO("t=", t, " lhs=", rec.lhs, " rhs=", rec.rhs);
      CHECK(rec.passed);
      CHECK(rec.lhs < rec.rhs);  // measured ratio strictly below the bound
    }
  }
  SUBCASE("centered bump: the flow is the identity") {
    GridField c = compact_bump(4.0, 257, 0.0);
    CheckRecord rec = verify_l2_continuity(c, 0.3, R, 256);
    CHECK(rec.passed);
    CHECK(rec.lhs <= 1e-12);
  }
  SUBCASE("support escaping the ball is rejected") {
    CHECK_THROWS_AS(verify_l2_continuity(u, 0.1, 1.0, 256), std::invalid_argument);
  }
}

TEST_CASE("truncation algebra records") {
  FlowCase flow = make_gaussian_vortex(8.0, 257);
  const GridField& u = *flow.u;

  SUBCASE("midrange truncation: all records pass") {
    for (double m : {0.25, 0.5, 0.75}) {
      auto records = verify_truncation_algebra(u, m, 0.4, 256);
      for (const CheckRecord& rec : records) {
        INFO(rec.name, " at m=", m, ": lhs=", rec.lhs, " tol=", rec.tolerance);
        CHECK(rec.passed);
      }
    }
  }
  SUBCASE("m near the maximum makes the upper part negligible") {
    auto records = verify_truncation_algebra(u, 0.999, 0.0, 256);
    for (const CheckRecord& rec : records) CHECK(rec.passed);
  }
  SUBCASE("linear field: gradient product vanishes off the zero band") {
    GridField lin = GridField::from_function(4.0, 129, [](double x, double) { return x; });
    auto records = verify_truncation_algebra(lin, 0.0, 0.0, 256);
    for (const CheckRecord& rec : records) CHECK(rec.passed);
  }
  SUBCASE("m outside the range is rejected") {
    CHECK_THROWS_AS(verify_truncation_algebra(u, 1.5, 0.1, 256), std::invalid_argument);
  }
}

TEST_CASE("J functional: fixed point, translation, missing f") {
  const std::vector<double> t_list{1e-3, 1e-2, 1e-1};

  SUBCASE("centered vortex: J vanishes identically") {
    FlowCase flow = make_gaussian_vortex(8.0, 257);
    auto records = j_derivative_test(flow, t_list, 1.0, 0.0, 256);
    for (const CheckRecord& rec : records) {
      INFO(rec.name, " lhs=", rec.lhs);
      CHECK(rec.passed);
    }
  }
  SUBCASE("shifted vortex stays above -eps_J") {
    FlowCase flow = make_gaussian_vortex(8.0, 257, 0.5, 0.0);
    auto records = j_derivative_test(flow, t_list, 1.0, 0.0, 256);
    double min_ratio = 0.0, eps = 0.0;
    for (const CheckRecord& rec : records) {
      CHECK(rec.passed);
      if (rec.name == "jfun.liminf_nonnegative") {
        min_ratio = -rec.lhs;
        eps = rec.tolerance;
      }
    }
    // translation oracle: J(t)/t = -c^2 (1-e^{-t})^2 I / (2t) at the largest t,
    // with I = int |d_x grad u|^2 = pi for the unit Gaussian profile
    double t = 0.1;
    double delta = 0.5 * (1.0 - std::exp(-t));
    double expected = -0.5 * delta * delta * std::numbers::pi / t;
    CHECK(min_ratio == doctest::Approx(expected).epsilon(0.15));
    CHECK(min_ratio >= -eps);
  }
  SUBCASE("missing nonlinearity") {
    FlowCase bump = make_two_bump(2.0, 0.0, 8.0, 129);
    CHECK_THROWS_AS(j_derivative_test(bump, t_list, 1.0, 0.0, 256),
                    std::invalid_argument);
  }
}

TEST_CASE("energy derivative: symmetric fields flat, sheared field positive") {
  const std::vector<double> t_list{1e-2};
  const std::vector<std::pair<double, double>> dirs{{1, 0}, {0, 1}, {1, 1}};

  SUBCASE("centered radial bump") {
    GridField u = shifted_bump(4.0, 257, 0.0);
    CheckRecord rec = energy_derivative_test(u, t_list, dirs, true, 512);
    INFO("ratio=", rec.lhs, " tol=", rec.tolerance);
    CHECK(rec.passed);
  }
  SUBCASE("translated bump keeps the energy derivative small") {
    // finite-t probe: the discrete energy of a reconstructed translate
    // carries an O(h) kink-placement wobble that 1/t amplifies, so the
    // shifted case is probed at t = 0.1 on the finer grid
    GridField u = shifted_bump(4.0, 513, 1.0);
    CheckRecord rec = energy_derivative_test(u, {0.1}, dirs, true, 512);
    INFO("ratio=", rec.lhs, " tol=", rec.tolerance);
    CHECK(rec.passed);
  }
  SUBCASE("overlapping two-bump field reports a positive derivative") {
    GridField u = GridField::from_function(4.0, 257, [](double x, double y) {
      return std::exp(-((x - 0.5) * (x - 0.5) + y * y)) +
             std::exp(-((x + 0.5) * (x + 0.5) + y * y));
    });
    CheckRecord rec = energy_derivative_test(u, t_list, dirs, false, 512);
    CHECK(rec.passed);  // diagnostic record
    CHECK(rec.lhs > 0.0);
    CHECK(rec.lhs > 1e-3 * dirichlet_energy(u));  // clearly above the noise floor
  }
}

TEST_CASE("Cavalieri holds for several continuous compositions") {
  GridField u = shifted_bump(4.0, 257, 0.9);
  SymmetrizationResult ut = symmetrize_function(u, 0.7);
  auto compare = [&](const std::function<double(double)>& F) {
    GridField a(u.half_width(), u.size()), b(u.half_width(), u.size());
    for (std::size_t k = 0; k < u.values().size(); ++k) {
      a.values()[k] = F(u.values()[k]);
      b.values()[k] = F(ut.field.values()[k]);
    }
    double ia = integrate(a), ib = integrate(b);
    CHECK(std::abs(ia - ib) <= 0.02 * std::max(std::abs(ia), 1e-12));
  };
  compare([](double w) { return w * w; });
  compare([](double w) { return std::abs(w); });
  compare([](double w) { return std::clamp(3.0 * w - 0.2, 0.0, 1.0); });
}
