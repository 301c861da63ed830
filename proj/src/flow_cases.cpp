#include "steinerlab/flow_cases.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

namespace steinerlab {

namespace {

// F' == f spot check over the usable range (construction invariant).
void check_primitive(const FlowCase& flow, double lo, double hi) {
  if (!flow.has_f() || !flow.has_F()) return;
  const int samples = 21;
  const double span = hi - lo;
  for (int k = 0; k < samples; ++k) {
    double w = lo + span * (0.05 + 0.95 * k / (samples - 1));
    double e = 1e-5 * std::max(1.0, std::abs(w));
    double fd = (flow.F(w + e) - flow.F(w - e)) / (2.0 * e);
    if (std::abs(fd - flow.f(w)) > 1e-8 * std::max(1.0, std::abs(flow.f(w)))) {
      throw std::invalid_argument("FlowCase: F' != f near w = " + format_double(w));
    }
  }
}

}  // namespace

FlowCase make_gaussian_vortex(double half_width, int n, double cx, double cy) {
  FlowCase flow;
  flow.name = "gaussian_vortex";
  flow.u = GridField::from_function(half_width, n, [cx, cy](double x, double y) {
    double dx = x - cx, dy = y - cy;
    return std::exp(-0.5 * (dx * dx + dy * dy));
  });
  flow.radial_u = [](double r) { return std::exp(-0.5 * r * r); };
  flow.radial_du = [](double r) { return -r * std::exp(-0.5 * r * r); };
  flow.f = [](double w) { return w > 0.0 ? 2.0 * w * (1.0 + std::log(w)) : 0.0; };
  flow.F = [](double w) { return w > 0.0 ? w * w * (0.5 + std::log(w)) : 0.0; };
  flow.limit_expected = 0.0;
  flow.limit_known = true;
  flow.hypothesis_H_ball = 3.0;
  flow.analytic_refs = {
      {"energy", std::numbers::pi},
      {"f_at_max", 2.0},
      {"bernoulli_at_center", -0.5},
      {"omega_at_center", -2.0},
      {"speed_max", std::exp(-0.5)},
  };
  check_primitive(flow, 0.05, 1.0);
  return flow;
}

FlowCase make_radial_from_f(const std::function<double(double)>& f, double u0,
                            double half_width, int n, double r_step, std::string name) {
  if (!(r_step > 0.0)) throw std::invalid_argument("make_radial_from_f: r_step > 0");
  const double r_max = half_width * std::sqrt(2.0) + 4.0 * r_step;

  // State (u, w = u'); w' = -f(u) - w/r with w'/r regularized at the origin.
  RadialProfile prof;
  prof.r.push_back(0.0);
  prof.values.push_back(u0);
  std::vector<double> slope{0.0};

  // Series start over the first step: u = u0 - f(u0) r^2 / 4.
  double r = r_step;
  double u = u0 - f(u0) * r_step * r_step / 4.0;
  double w = -f(u0) * r_step / 2.0;
  prof.r.push_back(r);
  prof.values.push_back(u);
  slope.push_back(w);

  auto du = [](double wv) { return wv; };
  auto dw = [&f](double rv, double uv, double wv) { return -f(uv) - wv / rv; };

  while (r < r_max) {
    double h = r_step;
    double k1u = du(w);
    double k1w = dw(r, u, w);
    double k2u = du(w + 0.5 * h * k1w);
    double k2w = dw(r + 0.5 * h, u + 0.5 * h * k1u, w + 0.5 * h * k1w);
    double k3u = du(w + 0.5 * h * k2w);
    double k3w = dw(r + 0.5 * h, u + 0.5 * h * k2u, w + 0.5 * h * k2w);
    double k4u = du(w + h * k3w);
    double k4w = dw(r + h, u + h * k3u, w + h * k3w);
    u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
    r += h;
    if (!std::isfinite(u) || !std::isfinite(w)) {
      throw std::runtime_error("make_radial_from_f: ODE blow-up before the domain edge");
    }
    prof.r.push_back(r);
    prof.values.push_back(u);
    slope.push_back(w);
  }

  FlowCase flow;
  flow.name = std::move(name);
  flow.f = f;
  // Linear interpolation on the dense mesh (r_step^2 error).
  auto interp = [step = r_step](const std::vector<double>& vals, double rv) {
    double fi = rv / step;
    std::size_t i = std::min(static_cast<std::size_t>(fi), vals.size() - 2);
    double t = fi - static_cast<double>(i);
    return (1.0 - t) * vals[i] + t * vals[i + 1];
  };
  flow.radial_u = [vals = prof.values, interp](double rv) { return interp(vals, rv); };
  flow.radial_du = [vals = slope, interp](double rv) { return interp(vals, rv); };
  flow.u = GridField::from_function(half_width, n, [&flow](double x, double y) {
    return flow.radial_u(std::hypot(x, y));
  });
  flow.profile = std::move(prof);
  flow.limit_expected = flow.profile->values.back();
  return flow;
}

FlowCase make_log_unbounded(double alpha, double half_width, int n) {
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw std::invalid_argument("make_log_unbounded: alpha in (0, 1/2) required");
  }
  FlowCase flow;
  flow.name = "log_unbounded";
  flow.radial_u = [alpha](double r) {
    return -std::pow(std::log(2.0 + r * r), alpha);
  };
  flow.radial_du = [alpha](double r) {
    double g = std::log(2.0 + r * r);
    return -alpha * std::pow(g, alpha - 1.0) * 2.0 * r / (2.0 + r * r);
  };
  flow.u = GridField::from_function(half_width, n, [&flow](double x, double y) {
    return flow.radial_u(std::hypot(x, y));
  });
  flow.limit_minus_inf = true;
  flow.limit_known = true;
  flow.limit_expected = -std::numeric_limits<double>::infinity();
  flow.analytic_refs = {{"alpha", alpha}};
  return flow;
}

FlowCase make_oscillating_counterexample(double alpha, double r_max,
                                         int samples_per_decade) {
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw std::invalid_argument("make_oscillating_counterexample: alpha in (0, 1/2) required");
  }
  FlowCase flow;
  flow.name = "oscillating_counterexample";
  auto psi = [alpha](double r) { return std::pow(std::log(2.0 + r * r), alpha); };
  auto dpsi = [alpha](double r) {
    double g = std::log(2.0 + r * r);
    return alpha * std::pow(g, alpha - 1.0) * 2.0 * r / (2.0 + r * r);
  };
  flow.radial_u = [psi](double r) { return std::cos(psi(r)); };
  flow.radial_du = [psi, dpsi](double r) { return -std::sin(psi(r)) * dpsi(r); };
  flow.limit_none = true;
  flow.analytic_refs = {{"alpha", alpha}, {"r_max", r_max}};

  // Critical circles psi(R_k) = k*pi, located by bisection in log r.  These
  // sit far beyond any usable grid (R_1 ~ 6e3 already for alpha = 0.4), so
  // they are predictions about the analytic profile, not grid quantities.
  for (int k = 1; k <= 3; ++k) {
    double target = k * std::numbers::pi;
    double lo = std::log(1e-6), hi = std::log(1e80);
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      (psi(std::exp(mid)) < target ? lo : hi) = mid;
    }
    flow.stagnation_radii.push_back(std::exp(0.5 * (lo + hi)));
  }

  // Log-spaced profile out to r_max.
  RadialProfile prof;
  const double decades = std::log10(r_max) + 3.0;  // start at r = 1e-3
  const int total = static_cast<int>(decades * samples_per_decade);
  prof.r.push_back(0.0);
  prof.values.push_back(flow.radial_u(0.0));
  for (int k = 0; k <= total; ++k) {
    double r = std::pow(10.0, -3.0 + decades * k / total);
    prof.r.push_back(r);
    prof.values.push_back(flow.radial_u(r));
  }
  flow.profile = std::move(prof);
  return flow;
}

FlowCase make_two_bump(double qx, double qy, double half_width, int n) {
  FlowCase flow;
  flow.name = "two_bump";
  flow.u = GridField::from_function(half_width, n, [qx, qy](double x, double y) {
    double d1 = (x - qx) * (x - qx) + (y - qy) * (y - qy);
    double d2 = (x + qx) * (x + qx) + (y + qy) * (y + qy);
    return std::exp(-d1) + std::exp(-d2);
  });
  flow.limit_expected = 0.0;
  flow.limit_known = true;
  flow.analytic_refs = {{"qx", qx}, {"qy", qy}};
  return flow;
}

FlowCase load_flow_case(const std::filesystem::path& grid_path,
                        const std::filesystem::path& sidecar_path) {
  FlowCase flow;
  flow.u = GridField::load(grid_path);

  std::ifstream in(sidecar_path);
  if (!in) throw std::runtime_error("load_flow_case: cannot open " + sidecar_path.string());
  nlohmann::json meta = nlohmann::json::parse(in);
  flow.name = meta.value("name", grid_path.stem().string());
  if (meta.contains("L_expected")) {
    flow.limit_known = true;
    if (meta["L_expected"].is_string() && meta["L_expected"] == "-inf") {
      flow.limit_minus_inf = true;
      flow.limit_expected = -std::numeric_limits<double>::infinity();
    } else {
      flow.limit_expected = meta["L_expected"].get<double>();
    }
  }
  if (meta.contains("H_ball")) flow.hypothesis_H_ball = meta["H_ball"].get<double>();

  if (meta.contains("f_table")) {
    std::vector<double> cs, fs;
    for (const auto& row : meta["f_table"]) {
      cs.push_back(row.at(0).get<double>());
      fs.push_back(row.at(1).get<double>());
    }
    if (cs.size() < 2 || !std::is_sorted(cs.begin(), cs.end())) {
      throw std::runtime_error("load_flow_case: f_table must be sorted with >= 2 rows");
    }
    auto interp = [cs, fs](double c) {
      if (c <= cs.front()) return fs.front();
      if (c >= cs.back()) return fs.back();
      auto it = std::upper_bound(cs.begin(), cs.end(), c);
      std::size_t i = static_cast<std::size_t>(it - cs.begin()) - 1;
      double t = (c - cs[i]) / (cs[i + 1] - cs[i]);
      return (1.0 - t) * fs[i] + t * fs[i + 1];
    };
    flow.f = interp;
    // Primitive by trapezoid over the table, anchored at the lowest entry.
    std::vector<double> Fs(cs.size(), 0.0);
    for (std::size_t i = 1; i < cs.size(); ++i) {
      Fs[i] = Fs[i - 1] + 0.5 * (fs[i] + fs[i - 1]) * (cs[i] - cs[i - 1]);
    }
    flow.F = [cs, Fs, interpF = interp](double c) {
      if (c <= cs.front()) return Fs.front();
      if (c >= cs.back()) return Fs.back();
      auto it = std::upper_bound(cs.begin(), cs.end(), c);
      std::size_t i = static_cast<std::size_t>(it - cs.begin()) - 1;
      double t = (c - cs[i]) / (cs[i + 1] - cs[i]);
      return (1.0 - t) * Fs[i] + t * Fs[i + 1];
    };
  }
  return flow;
}

FlowFields derive_fields(const FlowCase& flow) {
  if (!flow.u.has_value()) throw std::invalid_argument("derive_fields: case has no 2D grid");
  if (!flow.has_F()) throw std::invalid_argument("derive_fields: case has no primitive F");
  const GridField& u = *flow.u;

  VectorFieldGrid v = perp_gradient(u);
  GridField omega = laplacian(u);
  GridField bernoulli(u.half_width(), u.size());
  GridField pressure(u.half_width(), u.size());
  const std::size_t total = u.values().size();
  for (std::size_t k = 0; k < total; ++k) {
    double B = -flow.F(u.values()[k]);
    double speed2 = v.x.values()[k] * v.x.values()[k] + v.y.values()[k] * v.y.values()[k];
    bernoulli.values()[k] = B;
    pressure.values()[k] = B - 0.5 * speed2;
  }
  return FlowFields{std::move(v), std::move(omega), std::move(bernoulli),
                    std::move(pressure)};
}

std::vector<CheckRecord> euler_residuals(const VectorFieldGrid& v, const GridField& p,
                                         const GridField& omega, const GridField& B) {
  if (!v.x.same_grid(p) || !v.x.same_grid(omega) || !v.x.same_grid(B)) {
    throw std::invalid_argument("euler_residuals: mismatched grids");
  }
  const int n = v.x.size();
  const int margin = 3;

  VectorFieldGrid gvx = gradient(v.x);
  VectorFieldGrid gvy = gradient(v.y);
  VectorFieldGrid gp = gradient(p);
  VectorFieldGrid gB = gradient(B);

  double res_momentum = 0.0, res_div = 0.0, res_bernoulli = 0.0;
  double third_scale = 0.0;
  const double h = v.x.spacing();
  for (int j = margin; j < n - margin; ++j) {
    for (int i = margin; i < n - margin; ++i) {
      double ax = v.x(i, j) * gvx.x(i, j) + v.y(i, j) * gvx.y(i, j) + gp.x(i, j);
      double ay = v.x(i, j) * gvy.x(i, j) + v.y(i, j) * gvy.y(i, j) + gp.y(i, j);
      res_momentum = std::max(res_momentum, std::hypot(ax, ay));
      res_div = std::max(res_div, std::abs(gvx.x(i, j) + gvy.y(i, j)));
      double bx = gB.x(i, j) + omega(i, j) * (-v.y(i, j));
      double by = gB.y(i, j) + omega(i, j) * v.x(i, j);
      res_bernoulli = std::max(res_bernoulli, std::hypot(bx, by));
      // third-derivative scale of the velocity by triple differencing
      double t3x = std::abs(v.x(i + 2, j) - 2 * v.x(i + 1, j) + 2 * v.x(i - 1, j) -
                            v.x(i - 2, j)) / (2 * h * h * h);
      double t3y = std::abs(v.y(i, j + 2) - 2 * v.y(i, j + 1) + 2 * v.y(i, j - 1) -
                            v.y(i, j - 2)) / (2 * h * h * h);
      third_scale = std::max({third_scale, t3x, t3y});
    }
  }

  const double c_res = 4.0;
  const double tol = c_res * h * h * std::max(third_scale, 1e-12);
  auto rec = [&](std::string name, double value, std::string anchor) {
    CheckRecord r = CheckRecord::leq(std::move(name), value, 0.0, tol, std::move(anchor));
    r.metadata["tolerance_formula"] = "4 h^2 max|D^3 v|";
    r.metadata["h"] = format_double(h);
    return r;
  };
  return {
      rec("euler.residual.momentum", res_momentum, "(E)"),
      rec("euler.residual.divergence", res_div, "(E)"),
      rec("euler.residual.bernoulli", res_bernoulli, "(E2)"),
  };
}

}  // namespace steinerlab
