#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <stdexcept>

#include "oracles.hpp"
#include "steinerlab/contour.hpp"
#include "steinerlab/grid.hpp"
#include "steinerlab/grid_ops.hpp"

using namespace steinerlab;

namespace {

GridField gauss_bump(double L, int n, double cx = 0.0, double cy = 0.0,
                     double width = 1.0) {
  return GridField::from_function(L, n, [=](double x, double y) {
    double dx = x - cx, dy = y - cy;
    return std::exp(-0.5 * (dx * dx + dy * dy) / (width * width));
  });
}

}  // namespace

TEST_CASE("grid construction and validation") {
  CHECK_THROWS_AS(GridField(1.0, 8), std::invalid_argument);
  CHECK_THROWS_AS(GridField(-1.0, 32), std::invalid_argument);
  GridField g(2.0, 17);
  CHECK(g.spacing() == doctest::Approx(0.25));
  CHECK(g.x(0) == -2.0);
  CHECK(g.y(16) == 2.0);
}

TEST_CASE("gradient exact on linear fields") {
  GridField f = GridField::from_function(2.0, 33, [](double x, double) { return x; });
  VectorFieldGrid g = gradient(f);
  for (int j = 0; j < 33; ++j) {
    for (int i = 0; i < 33; ++i) {
      CHECK(g.x(i, j) == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(g.y(i, j) == doctest::Approx(0.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("laplacian exact on quadratics, O(h^2) on the Gaussian") {
  GridField q = GridField::from_function(2.0, 33,
                                         [](double x, double y) { return x * x + y * y; });
  GridField lap = laplacian(q);
  for (int j = 0; j < 33; ++j) {
    for (int i = 0; i < 33; ++i) CHECK(lap(i, j) == doctest::Approx(4.0).epsilon(1e-12));
  }

  GridField g = gauss_bump(8.0, 257);
  GridField lg = laplacian(g);
  // lap e^{-r^2/2} = (r^2 - 2) e^{-r^2/2} -> -2 at the origin
  CHECK(lg(128, 128) == doctest::Approx(-2.0).epsilon(4.0 * g.spacing() * g.spacing()));
}

TEST_CASE("laplacian equals divergence of gradient on cubic fields") {
  GridField f = GridField::from_function(2.0, 33, [](double x, double y) {
    return x * x * x - 2.0 * x * y + y * y + 0.5 * x;
  });
  GridField lap = laplacian(f);
  GridField dg = divergence(gradient(f));
  for (int j = 2; j < 31; ++j) {
    for (int i = 2; i < 31; ++i) {
      CHECK(std::abs(lap(i, j) - dg(i, j)) <= 1e-10);
    }
  }
}

TEST_CASE("vector grids must share geometry") {
  GridField a(2.0, 33), b(2.0, 65);
  CHECK_THROWS_AS(VectorFieldGrid(a, b), std::invalid_argument);
}

TEST_CASE("integrate: constants, Gaussian, Dirichlet energy") {
  GridField one = GridField::from_function(1.0, 17, [](double, double) { return 1.0; });
  CHECK(integrate(one) == doctest::Approx(4.0).epsilon(1e-13));

  // int e^{-r^2} over the plane is pi; truncation at L = 8 is negligible
  GridField g2 = GridField::from_function(8.0, 257, [](double x, double y) {
    return std::exp(-(x * x + y * y));
  });
  double pi_oracle = oracles::radial_integral([](double r) { return std::exp(-r * r); }, 12.0);
  CHECK(pi_oracle == doctest::Approx(std::numbers::pi).epsilon(1e-10));
  CHECK(integrate(g2) == doctest::Approx(std::numbers::pi).epsilon(1e-4));

  // int |grad e^{-r^2/2}|^2 = int r^2 e^{-r^2} = pi
  double energy_oracle =
      oracles::radial_integral([](double r) { return r * r * std::exp(-r * r); }, 12.0);
  CHECK(energy_oracle == doctest::Approx(std::numbers::pi).epsilon(1e-10));
  GridField g = gauss_bump(8.0, 257);
  VectorFieldGrid grad_g = gradient(g);
  GridField sq(8.0, 257);
  for (int j = 0; j < 257; ++j) {
    for (int i = 0; i < 257; ++i) {
      sq(i, j) = grad_g.x(i, j) * grad_g.x(i, j) + grad_g.y(i, j) * grad_g.y(i, j);
    }
  }
  CHECK(integrate(sq) == doctest::Approx(std::numbers::pi).epsilon(0.01));
}

TEST_CASE("integrate: ball and annulus regions with fractional cells") {
  GridField one = GridField::from_function(4.0, 129, [](double, double) { return 1.0; });
  CHECK(integrate(one, Region::ball(2.0)) ==
        doctest::Approx(std::numbers::pi * 4.0).epsilon(2e-3));
  CHECK(integrate(one, Region::annulus(1.0, 2.0)) ==
        doctest::Approx(std::numbers::pi * 3.0).epsilon(3e-3));
  CHECK_THROWS_AS(integrate(one, Region::ball(5.0)), std::invalid_argument);
  CHECK_THROWS_AS(integrate(one, Region::annulus(2.0, 1.0)), std::invalid_argument);
}

TEST_CASE("quadrature is second order on a domain with boundary terms") {
  // reference: the exact integral of e^{-r^2} over the square [-2,2]^2
  const double exact = std::pow(std::sqrt(std::numbers::pi) * std::erf(2.0), 2);
  auto gauss = [](double x, double y) { return std::exp(-(x * x + y * y)); };
  double e_coarse = std::abs(integrate(GridField::from_function(2.0, 33, gauss)) - exact);
  double e_fine = std::abs(integrate(GridField::from_function(2.0, 65, gauss)) - exact);
  CHECK(e_coarse / e_fine >= 3.5);
}

TEST_CASE("circle_trace on radial and linear fields") {
  GridField g = gauss_bump(8.0, 513);
  CircleTrace tr = circle_trace(g, 1.0, 512);
  CHECK(tr.oscillation <= 3e-4);  // bilinear error scale h^2 |D^2 f| / 8 at h = 1/32
  CHECK(tr.mean == doctest::Approx(std::exp(-0.5)).epsilon(1e-4));

  GridField lin = GridField::from_function(8.0, 513, [](double x, double) { return x; });
  CircleTrace tl = circle_trace(lin, 1.0, 512);
  CHECK(tl.oscillation == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(tl.mean == doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(circle_trace(g, 9.0, 128), std::out_of_range);
  CHECK_THROWS_AS(circle_trace(g, 1.0, 32), std::invalid_argument);
}

TEST_CASE("divergence theorem: boundary flux against the ball integral") {
  GridField g = gauss_bump(8.0, 513);
  GridField lap = laplacian(g);
  VectorFieldGrid grad_g = gradient(g);
  const double h = g.spacing();
  for (double R : {1.0, 2.0, 3.0}) {
    double ball = integrate(lap, Region::ball(R));
    int m = 2048;
    double flux = 0.0;
    for (int k = 0; k < m; ++k) {
      double th = 2.0 * std::numbers::pi * k / m;
      double cx = std::cos(th), sy = std::sin(th);
      flux += grad_g.x.sample(R * cx, R * sy) * cx + grad_g.y.sample(R * cx, R * sy) * sy;
    }
    flux *= 2.0 * std::numbers::pi * R / m;
    // closed form: 2 pi R u'(R)
    double closed = 2.0 * std::numbers::pi * R * (-R * std::exp(-0.5 * R * R));
    CHECK(flux == doctest::Approx(closed).epsilon(2e-3));
    CHECK(std::abs(ball - flux) <= 5.0 * h * std::max(1.0, std::abs(ball)));
  }
}

TEST_CASE("extract_contours: circles, empty sets, two components") {
  GridField f = GridField::from_function(2.0, 129, [](double x, double y) {
    return 1.0 - (x * x + y * y);
  });
  ContourSet cs = extract_contours(f, 0.75);
  CHECK(cs.connected_component_count == 1);
  CHECK(cs.all_closed());
  for (const auto& p : cs.polylines.front().points) {
    CHECK(std::hypot(p[0], p[1]) == doctest::Approx(0.5).epsilon(f.spacing()));
  }

  CHECK(extract_contours(f, 2.0).connected_component_count == 0);

  GridField two = GridField::from_function(4.0, 257, [](double x, double y) {
    double d1 = (x - 2.0) * (x - 2.0) + y * y;
    double d2 = (x + 2.0) * (x + 2.0) + y * y;
    return std::exp(-d1) + std::exp(-d2);
  });
  ContourSet c2 = extract_contours(two, 0.5);
  CHECK(c2.connected_component_count == 2);
  CHECK(c2.all_closed());
}

TEST_CASE("contours of a monotone radial field are single closed components") {
  GridField g = gauss_bump(4.0, 129);
  for (double c : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    ContourSet cs = extract_contours(g, c);
    CHECK(cs.connected_component_count == 1);
    CHECK(cs.all_closed());
  }
}

TEST_CASE("rotate_resample: identity, radial invariance, odd symmetry") {
  GridField g = gauss_bump(4.0, 129);
  GridField same = rotate_resample(g, 0.0);
  for (int j = 0; j < 129; ++j) {
    for (int i = 0; i < 129; ++i) CHECK(same(i, j) == g(i, j));
  }

  // radial fields are rotation invariant up to interpolation error
  const double h = g.spacing();
  GridField rot = rotate_resample(g, 0.83);
  double worst = 0.0;
  for (int j = 0; j < 129; ++j) {
    for (int i = 0; i < 129; ++i) worst = std::max(worst, std::abs(rot(i, j) - g(i, j)));
  }
  CHECK(worst <= 10.0 * h * h * 1.0);  // max |D^2 f| = 1 for the unit Gaussian

  GridField lin = GridField::from_function(4.0, 129, [](double x, double) { return x; });
  GridField neg = rotate_resample(lin, std::numbers::pi);
  for (int j = 32; j < 97; ++j) {
    for (int i = 32; i < 97; ++i) {
      CHECK(neg(i, j) == doctest::Approx(-lin(i, j)).epsilon(1e-9));
    }
  }
}

TEST_CASE("radial_profile: radial field, linear field, constant") {
  // fine grid so the bilinear scatter drops below 1e-6
  GridField g = gauss_bump(4.0, 4097);
  RadialProfile prof = radial_profile(g);
  REQUIRE(!prof.r.empty());
  for (std::size_t k = 0; k < prof.r.size(); k += 50) {
    CHECK(std::abs(prof.values[k] - std::exp(-0.5 * prof.r[k] * prof.r[k])) <= 1e-6);
    CHECK(prof.scatter[k] <= 1e-6);
  }

  GridField lin = GridField::from_function(4.0, 257, [](double x, double) { return x; });
  RadialProfile lp = radial_profile(lin);
  for (std::size_t k = 10; k < lp.r.size(); k += 40) {
    CHECK(std::abs(lp.values[k]) <= 1e-10);
    CHECK(lp.scatter[k] == doctest::Approx(lp.r[k] / std::sqrt(2.0)).epsilon(2e-3));
  }

  GridField cf = GridField::from_function(4.0, 129, [](double, double) { return 3.25; });
  RadialProfile cp = radial_profile(cf);
  for (std::size_t k = 0; k < cp.r.size(); ++k) {
    CHECK(cp.values[k] == doctest::Approx(3.25).epsilon(1e-14));
    CHECK(cp.scatter[k] <= 1e-12);
  }
}

TEST_CASE("grid file round trip is bit exact") {
  GridField g = gauss_bump(3.0, 33, 0.37, -0.21, 0.8);
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "steinerlab_test_io";
  fs::create_directories(dir);

  for (auto payload : {GridField::Payload::binary, GridField::Payload::csv}) {
    fs::path file = dir / (payload == GridField::Payload::binary ? "f.bin.gfield"
                                                                 : "f.csv.gfield");
    g.save(file, payload);
    GridField back = GridField::load(file);
    CHECK(back.size() == g.size());
    CHECK(back.half_width() == g.half_width());
    bool identical = true;
    for (std::size_t k = 0; k < g.values().size(); ++k) {
      if (back.values()[k] != g.values()[k]) identical = false;
    }
    CHECK(identical);
  }
  fs::remove_all(dir);
}
