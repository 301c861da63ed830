#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "steinerlab/check.hpp"
#include "steinerlab/grid.hpp"
#include "steinerlab/grid_ops.hpp"

namespace steinerlab {

/// A named steady-flow scenario: the stream function (2D grid and/or a 1D
/// radial profile) plus, when known, the nonlinearity f, its primitive F
/// (normalized so F -> 0 at the far-field value), and analytic reference
/// values for the verifiers.
struct FlowCase {
  std::string name;

  std::optional<GridField> u;

  /// 1D radial description, used by the profile-only cases and by the
  /// radial ODE builder.  values/scatter follow grid_ops::RadialProfile.
  std::optional<RadialProfile> profile;
  std::function<double(double)> radial_u;   // u(r), when analytic
  std::function<double(double)> radial_du;  // u'(r), when analytic

  std::function<double(double)> f;  // nonlinearity on (L, sup u]
  std::function<double(double)> F;  // primitive with F(L) = 0

  double limit_expected = 0.0;
  bool limit_known = false;
  bool limit_minus_inf = false;
  bool limit_none = false;  // the no-limit counterexample

  std::map<std::string, double> analytic_refs;
  std::optional<double> hypothesis_H_ball;
  std::vector<double> stagnation_radii;  // profile cases: predicted zero-circles

  bool has_f() const { return static_cast<bool>(f); }
  bool has_F() const { return static_cast<bool>(F); }
};

/// u = e^{-r^2/2}: explicit circular flow with f(w) = 2w(1 + ln w) and
/// F(w) = w^2 (1/2 + ln w) on (0, 1].
FlowCase make_gaussian_vortex(double half_width = 8.0, int n = 1025, double cx = 0.0,
                              double cy = 0.0);

/// Solve u'' + u'/r + f(u) = 0, u(0) = u0, u'(0) = 0 by RK4 with the series
/// start u ~ u0 - f(u0) r^2/4 at the removable singularity, then sample the
/// dense profile onto a grid.
FlowCase make_radial_from_f(const std::function<double(double)>& f, double u0,
                            double half_width, int n, double r_step = 1e-3,
                            std::string name = "radial_from_f");

/// u = -(log(2 + r^2))^alpha, alpha in (0, 1/2): gradient in L^2 but the
/// far-field value is -inf.
FlowCase make_log_unbounded(double alpha, double half_width = 8.0, int n = 513);

/// u = cos((log(2 + r^2))^alpha): no limit at infinity; the critical circles
/// sit at astronomic radii, so this case is profile-only.
FlowCase make_oscillating_counterexample(double alpha, double r_max = 1e8,
                                         int samples_per_decade = 512);

/// Two Gaussian bumps at +-q: the nonradial negative control (no f).
FlowCase make_two_bump(double qx, double qy, double half_width = 8.0, int n = 513);

/// Grid file plus a JSON sidecar {name, f_table?, L_expected, H_ball?}.
FlowCase load_flow_case(const std::filesystem::path& grid_path,
                        const std::filesystem::path& sidecar_path);

/// Velocity, vorticity, Bernoulli and pressure derived from the stream
/// function: v = (grad u)^perp, omega = lap u, B = -F(u),
/// p = -F(u) - |grad u|^2 / 2.
struct FlowFields {
  VectorFieldGrid v;
  GridField omega;
  GridField bernoulli;
  GridField pressure;
};

FlowFields derive_fields(const FlowCase& flow);

/// Sup norms of the steady-state identities over the interior minus a
/// 3-cell margin: v.grad v + grad p, div v, grad B + omega v^perp.
std::vector<CheckRecord> euler_residuals(const VectorFieldGrid& v, const GridField& p,
                                         const GridField& omega, const GridField& B);

}  // namespace steinerlab
