#include "steinerlab/euler_lab.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "steinerlab/verifiers.hpp"

namespace steinerlab {

namespace {

constexpr double kPi = std::numbers::pi;

int auto_theta(double radius, double h) {
  return std::max<int>(256, static_cast<int>(std::ceil(2.0 * kPi * radius / h)));
}

// Line integrals of gradient quantities on a circle: |grad u|^2, the normal
// and tangential derivative squares, sampled bilinearly from the gradient
// fields.
struct CircleGradient {
  double grad_sq_integral = 0.0;    // int |grad u|^2 dsigma
  double normal_sq_integral = 0.0;  // int |d_nu u|^2 dsigma
  double tangent_sq_integral = 0.0; // int |d_theta u|^2 dsigma
  double normal_integral = 0.0;     // int d_nu u dsigma
};

CircleGradient circle_gradient(const VectorFieldGrid& g, double radius) {
  const double h = g.x.spacing();
  const int m = auto_theta(radius, h);
  CircleGradient out;
  for (int k = 0; k < m; ++k) {
    double th = 2.0 * kPi * k / m;
    double cx = std::cos(th), sy = std::sin(th);
    double gx = g.x.sample(radius * cx, radius * sy);
    double gy = g.y.sample(radius * cx, radius * sy);
    double dn = gx * cx + gy * sy;
    double dt = -gx * sy + gy * cx;
    out.grad_sq_integral += gx * gx + gy * gy;
    out.normal_sq_integral += dn * dn;
    out.tangent_sq_integral += dt * dt;
    out.normal_integral += dn;
  }
  double w = 2.0 * kPi * radius / m;
  out.grad_sq_integral *= w;
  out.normal_sq_integral *= w;
  out.tangent_sq_integral *= w;
  out.normal_integral *= w;
  return out;
}

double l1_norm(const GridField& f) {
  GridField tmp = f;
  for (double& v : tmp.values()) v = std::abs(v);
  return integrate(tmp);
}

GridField apply_pointwise(const GridField& f, const std::function<double(double)>& fn) {
  GridField out(f.half_width(), f.size());
  const std::size_t total = f.values().size();
  for (std::size_t k = 0; k < total; ++k) out.values()[k] = fn(f.values()[k]);
  return out;
}

// Largest radius for which circles and their bilinear stencils stay inside.
double max_scan_radius(const GridField& f) { return f.half_width() - 2.0 * f.spacing(); }

}  // namespace

OscillationScan oscillation_scan(const GridField& u, const std::vector<double>& radii) {
  OscillationScan scan;
  const double h = u.spacing();
  for (double r : radii) {
    CircleTrace tr = circle_trace(u, r, auto_theta(r, h));
    scan.radii.push_back(r);
    scan.oscillation.push_back(tr.oscillation);
  }
  double running = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < scan.radii.size(); ++k) {
    if (scan.oscillation[k] < running) {
      running = scan.oscillation[k];
      scan.best_sequence.push_back(scan.radii[k]);
    }
  }
  double outer_min = std::numeric_limits<double>::infinity();
  for (std::size_t k = scan.radii.size() / 2; k < scan.radii.size(); ++k) {
    outer_min = std::min(outer_min, scan.oscillation[k]);
  }
  const double tol = 5.0 * h * discrete_lipschitz(u) + 1e-3;
  scan.record = CheckRecord::leq("oscillation.outer_min", outer_min, 0.0, tol,
                                 "Lemma 2.3");
  scan.record.metadata["tolerance_formula"] = "5 h Lip(u) + 1e-3";
  scan.record.metadata["radii"] = std::to_string(radii.size());
  return scan;
}

BoundaryScan boundary_scan(const GridField& u, const GridField& phi,
                           const std::vector<double>& radii) {
  if (!u.same_grid(phi)) throw std::invalid_argument("boundary_scan: mismatched grids");
  BoundaryScan scan;
  const double h = u.spacing();

  VectorFieldGrid gu = gradient(u);
  VectorFieldGrid gphi = gradient(phi);
  GridField neg_lap = laplacian(u);
  for (double& v : neg_lap.values()) v = -v;

  GridField lhs_field(u.half_width(), u.size());
  GridField dot_field(u.half_width(), u.size());
  const std::size_t total = u.values().size();
  for (std::size_t k = 0; k < total; ++k) {
    lhs_field.values()[k] = neg_lap.values()[k] * phi.values()[k];
    dot_field.values()[k] =
        gu.x.values()[k] * gphi.x.values()[k] + gu.y.values()[k] * gphi.y.values()[k];
  }
  const double lhs_l1 = l1_norm(lhs_field);

  double green_worst = 0.0;
  double growth_worst = 0.0;
  bool growth_any = false;

  // Reference circle at radius 1 for the R log R growth bound.
  double phi2_at_1 = 0.0;
  bool have_unit_circle = false;
  if (max_scan_radius(u) > 1.0) {
    CircleTrace tr = circle_trace(phi, 1.0, auto_theta(1.0, h));
    for (double v : tr.values) phi2_at_1 += v * v;
    phi2_at_1 *= 2.0 * kPi / tr.values.size();
    have_unit_circle = true;
  }

  for (double r : radii) {
    CircleGradient cg = circle_gradient(gu, r);
    double w = r * std::log(r) * cg.grad_sq_integral;
    scan.flux_series.emplace_back(r, w);

    // Green identity over B(r)
    double term_lhs = integrate(lhs_field, Region::ball(r));
    double term_dot = integrate(dot_field, Region::ball(r));
    CircleTrace phi_tr = circle_trace(phi, r, auto_theta(r, h));
    double boundary = 0.0;
    {
      const int m = static_cast<int>(phi_tr.values.size());
      for (int k = 0; k < m; ++k) {
        double th = 2.0 * kPi * k / m;
        double cx = std::cos(th), sy = std::sin(th);
        double dn = gu.x.sample(r * cx, r * sy) * cx + gu.y.sample(r * cx, r * sy) * sy;
        boundary += phi_tr.values[k] * dn;
      }
      boundary *= 2.0 * kPi * r / m;
    }
    double residual = std::abs(term_lhs - (term_dot - boundary));
    double scale = std::max(std::abs(term_lhs) + std::abs(term_dot) + std::abs(boundary),
                            1e-3 * lhs_l1 + 1e-300);
    green_worst = std::max(green_worst, residual / scale);

    // phi^2 growth against the annular-mean bound from radius 1
    if (have_unit_circle && r > 1.0) {
      double phi2 = 0.0;
      for (double v : phi_tr.values) phi2 += v * v;
      phi2 *= 2.0 * kPi * r / phi_tr.values.size();
      GridField gphi2(u.half_width(), u.size());
      for (std::size_t k = 0; k < total; ++k) {
        gphi2.values()[k] = gphi.x.values()[k] * gphi.x.values()[k] +
                            gphi.y.values()[k] * gphi.y.values()[k];
      }
      double dirichlet = integrate(gphi2, Region::annulus(1.0, r));
      double bound = r * std::pow(std::sqrt(phi2_at_1) +
                                      std::sqrt(std::log(r) * std::max(dirichlet, 0.0)),
                                  2.0);
      double denom = 1.01 * bound + 1e-9 * (phi.max_value() * phi.max_value() + 1.0);
      growth_worst = std::max(growth_worst, phi2 / denom);
      growth_any = true;
    }
  }

  {
    CheckRecord rec = CheckRecord::leq("boundary.green_identity", green_worst, 0.0,
                                       1.0 * h, "Lemma 4.2, Eq. (eq:lapl)");
    rec.metadata["tolerance_formula"] = "normalized residual <= h";
    scan.records.push_back(rec);
  }
  {
    // Existence of the good sphere sequence: the running minimum of
    // w(R) = R log R * flux keeps decreasing over the outer half.
    double run = std::numeric_limits<double>::infinity();
    double at_half = 0.0;
    for (std::size_t k = 0; k < scan.flux_series.size(); ++k) {
      run = std::min(run, scan.flux_series[k].second);
      if (k == scan.flux_series.size() / 2) at_half = run;
    }
    double ratio = at_half > 0.0 ? run / at_half : (run == 0.0 ? 0.0 : 1.0);
    CheckRecord rec = CheckRecord::leq("boundary.flux_running_min", ratio, 1.0, -1e-3,
                                       "Lemma 4.2, Eq. (eq:lemma:nota)");
    rec.metadata["tolerance_formula"] = "running min over the outer half shrinks by >= 0.1%";
    scan.records.push_back(rec);
  }
  if (growth_any) {
    CheckRecord rec = CheckRecord::leq("boundary.phi2_growth", growth_worst, 1.0, 0.0,
                                       "Lemma 4.2, Eq. (stima:palla)");
    rec.metadata["tolerance_formula"] =
        "int phi^2 <= 1.01 R (sqrt(int_{dB(1)} phi^2) + sqrt(log R int |grad phi|^2))^2";
    scan.records.push_back(rec);
  }
  return scan;
}

std::vector<CheckRecord> annular_mean_check(
    const GridField& phi, const std::vector<std::pair<double, double>>& pairs) {
  std::vector<CheckRecord> records;
  const double h = phi.spacing();
  VectorFieldGrid g = gradient(phi);
  GridField grad_sq(phi.half_width(), phi.size());
  const std::size_t total = phi.values().size();
  for (std::size_t k = 0; k < total; ++k) {
    grad_sq.values()[k] =
        g.x.values()[k] * g.x.values()[k] + g.y.values()[k] * g.y.values()[k];
  }

  for (auto [r1, r2] : pairs) {
    if (!(r1 > 0.0) || !(r1 < r2)) {
      throw std::invalid_argument("annular_mean_check: need 0 < r1 < r2");
    }
    auto mean_sqrt = [&](double r) {
      CircleTrace tr = circle_trace(phi, r, auto_theta(r, h));
      double phi2 = 0.0;
      for (double v : tr.values) phi2 += v * v;
      phi2 *= 2.0 * kPi * r / tr.values.size();
      return std::sqrt(phi2 / r);
    };
    double lhs = std::abs(mean_sqrt(r2) - mean_sqrt(r1));
    double rhs = std::sqrt(std::log(r2 / r1) * integrate(grad_sq, Region::annulus(r1, r2)));
    double abs_floor = 1e-9 * (std::abs(phi.max_value()) + std::abs(phi.min_value()) + 1.0);
    CheckRecord rec = CheckRecord::leq(
        "annular.mean[r1=" + format_double(r1) + ",r2=" + format_double(r2) + "]", lhs,
        rhs, 0.01 * rhs + abs_floor, "Lemma 4.2, Eq. (med:phi2)");
    rec.metadata["tolerance_formula"] = "1% of rhs + 1e-9 scale";
    records.push_back(rec);
  }
  return records;
}

PohozaevScan pohozaev_scan(const FlowCase& flow, const std::vector<double>& radii) {
  if (!flow.has_F()) throw std::invalid_argument("pohozaev_scan: case has no primitive F");
  if (!flow.u.has_value()) throw std::invalid_argument("pohozaev_scan: case has no grid");
  const GridField& u = *flow.u;
  const double h = u.spacing();

  GridField Fu = apply_pointwise(u, flow.F);
  VectorFieldGrid gu = gradient(u);
  const double f_l1 = l1_norm(Fu);

  PohozaevScan scan;
  double identity_worst = 0.0;
  for (double r : radii) {
    double psi = integrate(Fu, Region::ball(r));
    CircleTrace ftr = circle_trace(Fu, r, auto_theta(r, h));
    CircleGradient cg = circle_gradient(gu, r);
    double hr = 0.5 * (cg.normal_sq_integral - cg.tangent_sq_integral);
    double residual = std::abs(2.0 * psi - r * ftr.line_integral - r * hr);
    double habs = 0.5 * (cg.normal_sq_integral + cg.tangent_sq_integral);
    double scale = std::max(std::abs(2.0 * psi) + r * std::abs(ftr.line_integral) + r * habs,
                            1e-3 * f_l1 + 1e-300);
    identity_worst = std::max(identity_worst, residual / scale);
    scan.psi_series.emplace_back(r, psi);
    scan.boundary_series.emplace_back(r, hr);
    scan.residual_series.emplace_back(r, residual);
  }

  // Least-squares slope of Psi against R^2 over the outer half.
  {
    std::size_t start = scan.psi_series.size() / 2;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t k = start; k < scan.psi_series.size(); ++k) {
      double xx = scan.psi_series[k].first * scan.psi_series[k].first;
      double yy = scan.psi_series[k].second;
      sx += xx; sy += yy; sxx += xx * xx; sxy += xx * yy;
      ++m;
    }
    double denom = m * sxx - sx * sx;
    scan.ell = denom != 0.0 ? (m * sxy - sx * sy) / denom : 0.0;
  }

  {
    CheckRecord rec = CheckRecord::leq("pohozaev.identity", identity_worst, 0.0, 1e-2,
                                       "Lemma 4.3");
    rec.metadata["tolerance_formula"] = "normalized residual <= 1e-2 at every radius";
    scan.records.push_back(rec);
  }
  {
    CheckRecord rec = CheckRecord::leq("pohozaev.calibration", std::abs(scan.ell), 0.0,
                                       1e-3, "Lemma 4.3 (choice of the constant in F)");
    rec.metadata["tolerance_formula"] = "|slope of Psi vs R^2| <= 1e-3";
    rec.metadata["ell"] = format_double(scan.ell);
    scan.records.push_back(rec);
  }
  {
    double psi_last = scan.psi_series.empty() ? 0.0 : std::abs(scan.psi_series.back().second);
    CheckRecord rec = CheckRecord::leq("pohozaev.psi_decay", psi_last, 0.0, 1e-3,
                                       "Lemma 4.3: Psi(R) -> 0");
    rec.metadata["tolerance_formula"] = "|Psi(R_max)| <= 1e-3";
    scan.records.push_back(rec);
  }
  return scan;
}

StagnationAnalysis stagnation_analysis(const VectorFieldGrid& v, double tol_v) {
  const int n = v.x.size();
  if (tol_v <= 0.0) {
    // 5 h max|Dv| with the derivative scale from the component gradients
    VectorFieldGrid dx = gradient(v.x);
    VectorFieldGrid dy = gradient(v.y);
    double dmax = 0.0;
    const std::size_t total = v.x.values().size();
    for (std::size_t k = 0; k < total; ++k) {
      dmax = std::max({dmax, std::abs(dx.x.values()[k]), std::abs(dx.y.values()[k]),
                       std::abs(dy.x.values()[k]), std::abs(dy.y.values()[k])});
    }
    tol_v = 5.0 * v.x.spacing() * dmax;
  }

  StagnationAnalysis out;
  out.tol_v = tol_v;
  out.labels.assign(static_cast<std::size_t>(n) * n, -1);
  auto in_mask = [&](int i, int j) { return v.magnitude(i, j) <= tol_v; };

  std::size_t mask_count = 0;
  int next_label = 0;
  std::vector<char> touches_boundary;
  std::vector<std::size_t> sizes;
  std::deque<std::pair<int, int>> queue;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (!in_mask(i, j)) continue;
      ++mask_count;
      std::size_t idx = static_cast<std::size_t>(j) * n + i;
      if (out.labels[idx] >= 0) continue;
      int label = next_label++;
      touches_boundary.push_back(0);
      sizes.push_back(0);
      queue.emplace_back(i, j);
      out.labels[idx] = label;
      while (!queue.empty()) {
        auto [ci, cj] = queue.front();
        queue.pop_front();
        ++sizes[label];
        if (ci == 0 || ci == n - 1 || cj == 0 || cj == n - 1) touches_boundary[label] = 1;
        for (int dj = -1; dj <= 1; ++dj) {
          for (int di = -1; di <= 1; ++di) {
            int ni = ci + di, nj = cj + dj;
            if (ni < 0 || nj < 0 || ni >= n || nj >= n) continue;
            std::size_t nidx = static_cast<std::size_t>(nj) * n + ni;
            if (out.labels[nidx] >= 0 || !in_mask(ni, nj)) continue;
            out.labels[nidx] = label;
            queue.emplace_back(ni, nj);
          }
        }
      }
    }
  }

  if (mask_count >= static_cast<std::size_t>(n) * n * 99 / 100) {
    out.whole_plane = true;
    out.components = 1;
    out.connected = true;
    for (int& l : out.labels) l = 0;
    return out;
  }

  // Drop boundary-connected components: they represent decay at infinity.
  std::vector<int> remap(next_label, -1);
  int kept = 0;
  for (int l = 0; l < next_label; ++l) {
    if (!touches_boundary[l]) remap[l] = kept++;
  }
  for (int& l : out.labels) l = (l >= 0) ? remap[l] : -1;
  out.components = kept;
  out.connected = (kept == 1);
  return out;
}

FReconstruction reconstruct_f(const GridField& u, const GridField& B,
                              const std::vector<double>& levels) {
  if (!u.same_grid(B)) throw std::invalid_argument("reconstruct_f: mismatched grids");
  const double floor_value = u.boundary_ring_mean();
  const double umax = u.max_value();
  for (double c : levels) {
    if (!(c > floor_value && c < umax)) {
      throw std::invalid_argument("reconstruct_f: levels must lie in (floor, max u)");
    }
  }
  if (levels.size() < 3 || !std::is_sorted(levels.begin(), levels.end())) {
    throw std::invalid_argument("reconstruct_f: need >= 3 sorted levels");
  }

  FReconstruction out;
  const double h = u.spacing();
  const double lipB = discrete_lipschitz(B);

  for (double c : levels) {
    ContourSet cs = extract_contours(u, c);
    CheckRecord closed = CheckRecord::leq(
        "freconstruct.closed[c=" + format_double(c) + "]",
        cs.all_closed() ? 0.0 : 1.0, 0.0, 0.0, "Thm 1.1 Step 1");
    closed.metadata["components"] = std::to_string(cs.connected_component_count);
    out.records.push_back(closed);

    CheckRecord connected = CheckRecord::leq(
        "freconstruct.connected[c=" + format_double(c) + "]",
        static_cast<double>(cs.connected_component_count), 1.0, 0.0, "Thm 1.1 Step 1");
    out.records.push_back(connected);

    double sum = 0.0, sum2 = 0.0;
    std::size_t count = 0;
    for (const Polyline& line : cs.polylines) {
      for (const auto& p : line.points) {
        double b = B.sample(p[0], p[1]);
        sum += b;
        sum2 += b * b;
        ++count;
      }
    }
    double mean = count > 0 ? sum / count : 0.0;
    double var = count > 0 ? std::max(0.0, sum2 / count - mean * mean) : 0.0;
    CheckRecord constancy = CheckRecord::leq(
        "freconstruct.bernoulli_constant[c=" + format_double(c) + "]", std::sqrt(var),
        0.0, 2.0 * h * lipB + 1e-9 * (std::abs(mean) + 1.0), "Thm 1.1 Step 2");
    constancy.metadata["tolerance_formula"] = "2 h Lip(B) + 1e-9 scale";
    out.records.push_back(constancy);

    out.F_table.emplace_back(c, -mean);
  }

  // f = F' by centered differences over the level grid, second-order
  // one-sided at the two ends.
  const std::size_t m = out.F_table.size();
  for (std::size_t k = 0; k < m; ++k) {
    double c = out.F_table[k].first;
    double df;
    if (k == 0) {
      double d = out.F_table[1].first - out.F_table[0].first;
      df = (-3.0 * out.F_table[0].second + 4.0 * out.F_table[1].second -
            out.F_table[2].second) / (2.0 * d);
    } else if (k == m - 1) {
      double d = out.F_table[m - 1].first - out.F_table[m - 2].first;
      df = (3.0 * out.F_table[m - 1].second - 4.0 * out.F_table[m - 2].second +
            out.F_table[m - 3].second) / (2.0 * d);
    } else {
      df = (out.F_table[k + 1].second - out.F_table[k - 1].second) /
           (out.F_table[k + 1].first - out.F_table[k - 1].first);
    }
    out.f_table.emplace_back(c, df);
  }

  // Endpoint value at the top of the range from -lap u at the deepest
  // stagnation cell.
  GridField lap = laplacian(u);
  VectorFieldGrid gu = gradient(u);
  {
    const int n = u.size();
    double best = std::numeric_limits<double>::infinity();
    int bi = n / 2, bj = n / 2;
    for (int j = 1; j < n - 1; ++j) {
      for (int i = 1; i < n - 1; ++i) {
        double mag = std::hypot(gu.x(i, j), gu.y(i, j));
        if (mag < best) {
          best = mag;
          bi = i;
          bj = j;
        }
      }
    }
    out.f_at_max = -lap(bi, bj);
  }

  // Pointwise residual sup of -lap u = f(u) away from the stagnation band
  // and outside the tabulated range.
  {
    const int n = u.size();
    VectorFieldGrid gx = gradient(gu.x);
    VectorFieldGrid gy = gradient(gu.y);
    double hess = 0.0;
    const std::size_t total = u.values().size();
    for (std::size_t k = 0; k < total; ++k) {
      hess = std::max({hess, std::abs(gx.x.values()[k]), std::abs(gx.y.values()[k]),
                       std::abs(gy.x.values()[k]), std::abs(gy.y.values()[k])});
    }
    const double band = 5.0 * h * hess;
    auto interp = [&](double c) {
      if (c <= out.f_table.front().first) return out.f_table.front().second;
      if (c >= out.f_table.back().first) return out.f_table.back().second;
      auto it = std::upper_bound(out.f_table.begin(), out.f_table.end(), c,
                                 [](double v, const auto& p) { return v < p.first; });
      auto lo = it - 1;
      double t = (c - lo->first) / (it->first - lo->first);
      return (1.0 - t) * lo->second + t * it->second;
    };
    // Sweep only the centered-difference interior of the table; the one-sided
    // endpoint rows carry an O(gap^2 f'') bias of their own.
    double worst = 0.0;
    const double c_lo = out.f_table[1].first;
    const double c_hi = out.f_table[m - 2].first;
    for (int j = 3; j < n - 3; ++j) {
      for (int i = 3; i < n - 3; ++i) {
        double c = u(i, j);
        if (c < c_lo || c > c_hi) continue;
        if (std::hypot(gu.x(i, j), gu.y(i, j)) <= band) continue;
        worst = std::max(worst, std::abs(-lap(i, j) - interp(c)));
      }
    }
    out.residual_sup = worst;
    double fmax = 0.0;
    for (const auto& [c, fv] : out.f_table) fmax = std::max(fmax, std::abs(fv));
    CheckRecord rec = CheckRecord::leq("freconstruct.residual", worst, 0.0,
                                       0.02 * std::max(fmax, 1e-12), "Thm 1.1 Step 2");
    rec.metadata["tolerance_formula"] = "2% of max |f| over the table";
    out.records.push_back(rec);
  }
  return out;
}

const char* to_string(SymmetryClass c) {
  switch (c) {
    case SymmetryClass::radial: return "radial";
    case SymmetryClass::locally_symmetric_multi: return "locally_symmetric_multi";
    case SymmetryClass::nonradial: return "nonradial";
  }
  return "?";
}

LocalSymmetry local_symmetry_detect(const GridField& u, const VectorFieldGrid& v) {
  LocalSymmetry out;
  StagnationAnalysis stag = stagnation_analysis(v);
  const int n = u.size();

  if (stag.whole_plane) {
    out.classification = SymmetryClass::radial;
    return out;
  }

  // Core component: the one holding the maximum of u; fall back to the cell
  // with the smallest speed.
  int core = -1;
  {
    double best = -std::numeric_limits<double>::infinity();
    int bi = 0, bj = 0;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        if (u(i, j) > best) {
          best = u(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    core = stag.labels[static_cast<std::size_t>(bj) * n + bi];
    if (core < 0) {
      double vmin = std::numeric_limits<double>::infinity();
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
          int l = stag.labels[static_cast<std::size_t>(j) * n + i];
          if (l >= 0 && v.magnitude(i, j) < vmin) {
            vmin = v.magnitude(i, j);
            core = l;
          }
        }
      }
    }
  }
  if (core < 0) {
    out.classification = SymmetryClass::nonradial;
    return out;
  }

  double cx = 0.0, cy = 0.0;
  std::size_t count = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (stag.labels[static_cast<std::size_t>(j) * n + i] == core) {
        cx += u.x(i);
        cy += u.y(j);
        ++count;
      }
    }
  }
  cx /= count;
  cy /= count;
  out.center_x = cx;
  out.center_y = cy;

  out.profile = radial_profile(u, cx, cy);
  const double tol_s = 2.0 * u.spacing() * discrete_lipschitz(u) + 1e-12;
  const double scale = u.max_value() - u.min_value();

  const std::size_t m = out.profile.r.size();
  std::size_t scatter_ok = 0;
  std::vector<char> ok(m, 0);
  for (std::size_t k = 0; k < m; ++k) {
    ok[k] = out.profile.scatter[k] <= tol_s;
    scatter_ok += ok[k];
  }
  // Maximal radius ranges with small scatter and strictly decreasing means.
  const double dec_tol = 1e-12 * scale;
  std::size_t k = 0;
  while (k < m) {
    if (!ok[k]) {
      ++k;
      continue;
    }
    std::size_t start = k;
    while (k + 1 < m && ok[k + 1] &&
           out.profile.values[k + 1] < out.profile.values[k] + dec_tol) {
      ++k;
    }
    if (k > start + 1) {
      out.annuli.emplace_back(out.profile.r[start], out.profile.r[k]);
    }
    ++k;
  }

  double covered = 0.0;
  for (auto [a, b] : out.annuli) covered += b - a;
  const double span = out.profile.r.empty() ? 0.0 : out.profile.r.back() - out.profile.r.front();
  const double coverage = span > 0.0 ? covered / span : 0.0;
  const double scatter_fraction = m > 0 ? static_cast<double>(scatter_ok) / m : 0.0;

  if (scatter_fraction >= 0.95 && out.annuli.size() == 1 && coverage >= 0.9) {
    out.classification = SymmetryClass::radial;
  } else if (out.annuli.size() >= 2 && coverage >= 0.8 && scatter_fraction >= 0.95) {
    out.classification = SymmetryClass::locally_symmetric_multi;
  } else {
    out.classification = SymmetryClass::nonradial;
  }
  return out;
}

namespace {

// Adaptive Simpson in log radius for the 1D energy of the profile cases.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int depth) {
  double m = 0.5 * (a + b);
  double fa = f(a), fb = f(b), fm = f(m);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  std::function<double(double, double, double, double, double, double, int)> rec =
      [&](double x0, double x2, double f0, double f1, double f2, double acc,
          int d) -> double {
    double x1 = 0.5 * (x0 + x2);
    double xl = 0.5 * (x0 + x1), xr = 0.5 * (x1 + x2);
    double fl = f(xl), fr = f(xr);
    double left = (x1 - x0) / 6.0 * (f0 + 4.0 * fl + f1);
    double right = (x2 - x1) / 6.0 * (f1 + 4.0 * fr + f2);
    if (d <= 0 || std::abs(left + right - acc) < 15.0 * tol) {
      return left + right + (left + right - acc) / 15.0;
    }
    return rec(x0, x1, f0, fl, f1, left, d - 1) + rec(x1, x2, f1, fr, f2, right, d - 1);
  };
  return rec(a, b, fa, fm, fb, whole, depth);
}

double radial_energy(const FlowCase& flow, double r_lo, double r_hi) {
  auto integrand = [&flow](double s) {
    double r = std::exp(s);
    double du = flow.radial_du(r);
    return du * du * 2.0 * kPi * r * r;  // extra r from dr = r ds
  };
  double s_lo = std::log(std::max(r_lo, 1e-9));
  double s_hi = std::log(r_hi);
  return adaptive_simpson(integrand, s_lo, s_hi, 1e-12, 40);
}

}  // namespace

AsymptoticsReport asymptotics_report(const FlowCase& flow) {
  AsymptoticsReport report;

  // --- profile-only cases -------------------------------------------------
  if (!flow.u.has_value()) {
    if (!flow.profile.has_value()) {
      throw std::invalid_argument("asymptotics_report: case has neither grid nor profile");
    }
    const RadialProfile& prof = *flow.profile;
    const double r_max = prof.r.back();

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    double all_lo = lo, all_hi = hi;
    for (std::size_t k = 0; k < prof.r.size(); ++k) {
      all_lo = std::min(all_lo, prof.values[k]);
      all_hi = std::max(all_hi, prof.values[k]);
      if (prof.r[k] >= 0.1 * r_max) {
        lo = std::min(lo, prof.values[k]);
        hi = std::max(hi, prof.values[k]);
      }
    }
    const double outer_osc = hi - lo;
    const double range = all_hi - all_lo;

    // The profile has no limit when it keeps swinging across its full range:
    // either the last-decade oscillation stays large, or the values at the
    // predicted critical circles (which may sit far beyond the sampled range)
    // alternate in sign with near-extremal magnitude.
    bool alternating = false;
    if (flow.stagnation_radii.size() >= 2 && flow.radial_u) {
      alternating = true;
      double prev = flow.radial_u(flow.stagnation_radii[0]);
      for (std::size_t k = 1; k < flow.stagnation_radii.size(); ++k) {
        double cur = flow.radial_u(flow.stagnation_radii[k]);
        if (!(prev * cur < 0.0) || std::abs(cur) < 0.25 * range) alternating = false;
        prev = cur;
      }
    }
    if (outer_osc > 0.5 * range || alternating) {
      report.limit_flag = AsymptoticsReport::LimitFlag::none;
    } else {
      report.limit_flag = AsymptoticsReport::LimitFlag::finite;
      report.limit_estimate = prof.values.back();
    }
    CheckRecord limit = CheckRecord::info("asym.limit", report.limit_estimate.value_or(0.0),
                                          "Prop 2.1");
    limit.metadata["flag"] = report.limit_flag == AsymptoticsReport::LimitFlag::none
                                 ? "no_limit"
                                 : "finite";
    limit.metadata["outer_oscillation"] = format_double(outer_osc);
    report.records.push_back(limit);

    if (flow.radial_du) {
      double total = radial_energy(flow, 0.0, r_max);
      double tail = radial_energy(flow, 0.1 * r_max, r_max);
      CheckRecord conv = CheckRecord::leq("asym.energy_tail", tail, 0.0, 1e-3 * total,
                                          "Prop 2.1 Remark: grad u in L^2");
      conv.metadata["tolerance_formula"] = "tail over the last decade <= 1e-3 of total";
      conv.metadata["total_energy"] = format_double(total);
      conv.metadata["tail_energy"] = format_double(tail);
      report.records.push_back(conv);
    }

    for (std::size_t k = 0; k < flow.stagnation_radii.size(); ++k) {
      double rk = flow.stagnation_radii[k];
      double expected = (k % 2 == 0) ? -1.0 : 1.0;  // cos(k pi), k = 1, 2, ...
      CheckRecord rec = CheckRecord::leq(
          "asym.critical_circle[k=" + std::to_string(k + 1) + "]",
          std::abs(flow.radial_u(rk) - expected), 0.0, 1e-6, "Prop 2.1 Remark");
      rec.metadata["radius"] = format_double(rk);
      report.records.push_back(rec);
    }
    return report;
  }

  // --- grid cases ----------------------------------------------------------
  const GridField& u = *flow.u;
  RadialProfile means = radial_profile(u, 0.0, 0.0);
  const std::size_t m = means.r.size();
  if (m < 8) throw std::invalid_argument("asymptotics_report: grid too small");

  // (a) limit estimate from the outer circle means.  Means that keep falling
  // by more than 10% of the total range over the outer half, with bounded
  // oscillation, flag divergence to -inf.
  const double range = u.max_value() - u.min_value();
  const double outer_drop = means.values[m / 2] - means.values[m - 1];
  double outer_osc = 0.0;
  for (std::size_t k = m / 2; k < m; ++k) outer_osc = std::max(outer_osc, means.scatter[k]);
  bool monotone_outer = true;
  for (std::size_t k = m / 2; k + 1 < m; ++k) {
    if (means.values[k + 1] > means.values[k] + 1e-9 * range) monotone_outer = false;
  }

  if (monotone_outer && outer_drop > 0.1 * range && outer_osc < 0.05 * range) {
    report.limit_flag = AsymptoticsReport::LimitFlag::minus_inf;
  } else {
    report.limit_flag = AsymptoticsReport::LimitFlag::finite;
    report.limit_estimate = means.values.back();
  }

  {
    CheckRecord limit = CheckRecord::info(
        "asym.limit", report.limit_estimate.value_or(0.0), "Thm 1.1 (A2) ii)");
    limit.metadata["flag"] = report.limit_flag == AsymptoticsReport::LimitFlag::minus_inf
                                 ? "minus_inf"
                                 : "finite";
    limit.metadata["outer_scatter"] = format_double(outer_osc);
    limit.metadata["outer_drop"] = format_double(outer_drop);
    report.records.push_back(limit);

    if (report.limit_flag == AsymptoticsReport::LimitFlag::finite && flow.limit_known &&
        !flow.limit_minus_inf) {
      CheckRecord match = CheckRecord::leq(
          "asym.limit_value", std::abs(*report.limit_estimate - flow.limit_expected),
          0.0, 1e-4 * std::max(1.0, range) + outer_osc, "Thm 1.1 (A2) ii)");
      match.metadata["tolerance_formula"] = "1e-4 max(1, range) + outer scatter";
      report.records.push_back(match);
    }
  }

  // (b) monotone decay of |v|, omega (and B when available) on the outer half.
  VectorFieldGrid v = perp_gradient(u);
  GridField omega = laplacian(u);
  GridField speed(u.half_width(), u.size());
  for (int j = 0; j < u.size(); ++j) {
    for (int i = 0; i < u.size(); ++i) speed(i, j) = v.magnitude(i, j);
  }
  auto decay_record = [&](const GridField& field, const std::string& label,
                          const std::string& anchor) {
    RadialProfile prof = radial_profile(field, 0.0, 0.0);
    double worst = -std::numeric_limits<double>::infinity();
    double fmax = std::max(std::abs(field.max_value()), std::abs(field.min_value()));
    for (std::size_t k = prof.r.size() / 2; k + 1 < prof.r.size(); ++k) {
      worst = std::max(worst, std::abs(prof.values[k + 1]) - std::abs(prof.values[k]));
    }
    CheckRecord rec = CheckRecord::leq("asym.decay." + label, worst, 0.0, 1e-6 * fmax,
                                       anchor);
    rec.metadata["tolerance_formula"] = "|circle mean| non-increasing on the outer half";
    return rec;
  };
  report.records.push_back(decay_record(speed, "speed", "Thm 1.2: |v| -> 0"));
  report.records.push_back(decay_record(omega, "vorticity", "Thm 1.2: omega -> 0"));

  const bool finite_limit = report.limit_flag == AsymptoticsReport::LimitFlag::finite;

  if (flow.has_F() && finite_limit) {
    FlowFields fields = derive_fields(flow);
    report.records.push_back(
        decay_record(fields.bernoulli, "bernoulli", "Thm 1.2: B -> 0"));

    // (e) pressure non-decreasing along radii for circular flows.
    LocalSymmetry sym = local_symmetry_detect(u, fields.v);
    if (sym.classification == SymmetryClass::radial) {
      RadialProfile pp = radial_profile(fields.pressure, sym.center_x, sym.center_y);
      double worst = -std::numeric_limits<double>::infinity();
      double prange = fields.pressure.max_value() - fields.pressure.min_value();
      for (std::size_t k = 0; k + 1 < pp.r.size(); ++k) {
        worst = std::max(worst, pp.values[k] - pp.values[k + 1]);
      }
      CheckRecord rec = CheckRecord::leq("asym.pressure_monotone", worst, 0.0,
                                         1e-6 * std::max(prange, 1e-12),
                                         "p(r) non-decreasing");
      rec.metadata["tolerance_formula"] = "decrements <= 1e-6 of the pressure range";
      report.records.push_back(rec);
    }
  }

  // (c) vanishing integrals, with the truncation tail estimated from the
  // decay rate across the two outermost annuli.
  if (finite_limit) {
    const double r_out = max_scan_radius(u);
    auto tail_estimate = [&](const GridField& field) {
      double i1 = integrate(field, Region::annulus(0.8 * r_out, 0.9 * r_out));
      double i2 = integrate(field, Region::annulus(0.9 * r_out, r_out));
      double a1 = std::abs(i1), a2 = std::abs(i2);
      if (a2 <= 0.0) return 0.0;
      double rho = a2 / std::max(a1, 1e-300);
      if (rho >= 0.9) return a2 * 10.0;  // no clear decay: generous flat tail
      return a2 * rho / (1.0 - rho);
    };
    auto integral_record = [&](const GridField& field, const std::string& label,
                               const std::string& anchor) {
      double total = integrate(field);
      double tol = 1e-3 * l1_norm(field) + tail_estimate(field);
      CheckRecord rec = CheckRecord::leq("asym.integral." + label, std::abs(total), 0.0,
                                         tol, anchor);
      rec.metadata["tolerance_formula"] = "1e-3 ||.||_L1 + truncation tail estimate";
      rec.metadata["value"] = format_double(total);
      return rec;
    };
    report.records.push_back(
        integral_record(omega, "vorticity", "Thm 1.2: int omega = 0"));
    if (flow.has_F()) {
      GridField Fu = apply_pointwise(u, flow.F);
      GridField Bf(u.half_width(), u.size());
      for (std::size_t k = 0; k < Bf.values().size(); ++k) {
        Bf.values()[k] = -Fu.values()[k];
      }
      report.records.push_back(integral_record(Bf, "bernoulli", "Thm 1.2: int B = 0"));
      report.records.push_back(
          integral_record(Fu, "primitive", "Thm 4.1: int F(u) = 0"));
    }
    if (flow.has_f()) {
      GridField fu = apply_pointwise(u, flow.f);
      report.records.push_back(
          integral_record(fu, "nonlinearity", "Thm 4.1: int f(u) = 0"));
      double total_f = integrate(fu);
      double total_w = integrate(omega);
      CheckRecord rec = CheckRecord::leq(
          "asym.vorticity_vs_f", std::abs(total_f + total_w), 0.0,
          2e-3 * std::max(l1_norm(fu), l1_norm(omega)), "omega = -f(u)");
      rec.metadata["tolerance_formula"] = "2e-3 max(||f(u)||_L1, ||omega||_L1)";
      report.records.push_back(rec);
    }
  } else if (flow.radial_du) {
    // Divergence-theorem cross-check for the unbounded-limit cases:
    // int_{B(R)} omega = 2 pi R u'(R).
    double worst = 0.0;
    std::vector<double> closed_form;
    const double r_out = max_scan_radius(u);
    for (double r : {0.3 * r_out, 0.5 * r_out, 0.7 * r_out, 0.9 * r_out}) {
      double lhs = integrate(omega, Region::ball(r));
      double rhs = 2.0 * kPi * r * flow.radial_du(r);
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-12));
      closed_form.push_back(std::abs(rhs));
    }
    CheckRecord rec = CheckRecord::leq("asym.flux_identity", worst, 0.0, 1e-2,
                                       "divergence theorem");
    rec.metadata["tolerance_formula"] = "relative mismatch <= 1e-2";
    report.records.push_back(rec);
    CheckRecord trend = CheckRecord::leq("asym.flux_decreasing",
                                         closed_form.back() - closed_form.front(), 0.0,
                                         0.0, "int_{B(R)} omega -> 0");
    report.records.push_back(trend);
  }

  // (d) sign and monotonicity of the reconstructed nonlinearity near the
  // far-field value.
  if (flow.has_F() && finite_limit) {
    const double lhat = *report.limit_estimate;
    const double floor_value = u.boundary_ring_mean();
    double m_top;
    if (flow.hypothesis_H_ball.has_value() &&
        *flow.hypothesis_H_ball < max_scan_radius(u)) {
      CircleTrace tr = circle_trace(u, *flow.hypothesis_H_ball,
                                    auto_theta(*flow.hypothesis_H_ball, u.spacing()));
      m_top = tr.mean;
    } else {
      m_top = lhat + 0.1 * (u.max_value() - lhat);
    }
    const double delta = 0.1 * (m_top - lhat);
    const double lo = std::max(lhat + delta, floor_value + 1e-3 * (u.max_value() - floor_value));
    if (m_top > lo) {
      GridField Bf = apply_pointwise(u, [&flow](double w) { return -flow.F(w); });
      std::vector<double> levels;
      for (int k = 0; k < 9; ++k) levels.push_back(lo + (m_top - lo) * k / 8.0);
      FReconstruction rec_f = reconstruct_f(u, Bf, levels);
      double fmax = 0.0, worst_sign = -std::numeric_limits<double>::infinity(),
             worst_mono = -std::numeric_limits<double>::infinity();
      for (const auto& [c, fv] : rec_f.f_table) fmax = std::max(fmax, std::abs(fv));
      for (std::size_t k = 0; k < rec_f.f_table.size(); ++k) {
        worst_sign = std::max(worst_sign, rec_f.f_table[k].second);
        if (k + 1 < rec_f.f_table.size()) {
          worst_mono = std::max(worst_mono, rec_f.f_table[k + 1].second -
                                                rec_f.f_table[k].second);
        }
      }
      double tol_f = 1e-3 * std::max(fmax, 1e-12);
      CheckRecord sign = CheckRecord::leq("asym.f_nonpositive", worst_sign, 0.0, tol_f,
                                          "Thm 4.1 Step 1");
      sign.metadata["range"] = format_double(lo) + ".." + format_double(m_top);
      report.records.push_back(sign);
      CheckRecord mono = CheckRecord::leq("asym.f_nonincreasing", worst_mono, 0.0, tol_f,
                                          "Thm 4.1 Step 1");
      report.records.push_back(mono);
    }
  }

  return report;
}

FlowDiagnostics run_euler_diagnostics(const FlowCase& flow) {
  FlowDiagnostics diag;
  if (!flow.u.has_value()) {
    throw std::invalid_argument("run_euler_diagnostics: case has no grid");
  }
  const GridField& u = *flow.u;
  diag.energy = dirichlet_energy(u);

  GridField omega = laplacian(u);
  diag.total_vorticity = integrate(omega);

  VectorFieldGrid v = perp_gradient(u);
  StagnationAnalysis stag = stagnation_analysis(v);
  diag.stagnation_components = stag.components;

  if (flow.has_F()) {
    FlowFields fields = derive_fields(flow);
    diag.total_bernoulli = integrate(fields.bernoulli);
    std::vector<CheckRecord> res =
        euler_residuals(fields.v, fields.pressure, fields.omega, fields.bernoulli);
    diag.euler_residual_sup = res[0].lhs;
    diag.div_residual_sup = res[1].lhs;
    diag.e2_residual_sup = res[2].lhs;
    for (CheckRecord& r : res) diag.records.push_back(std::move(r));
  }

  AsymptoticsReport asym = asymptotics_report(flow);
  diag.limit_estimate = asym.limit_estimate;
  for (CheckRecord& r : asym.records) diag.records.push_back(std::move(r));
  return diag;
}

}  // namespace steinerlab
