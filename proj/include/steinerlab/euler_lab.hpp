#pragma once

#include <optional>
#include <string>
#include <vector>

#include "steinerlab/check.hpp"
#include "steinerlab/contour.hpp"
#include "steinerlab/flow_cases.hpp"
#include "steinerlab/grid.hpp"
#include "steinerlab/grid_ops.hpp"

namespace steinerlab {

/// Circle oscillation max - min of u on each radius; the running minima
/// locate the good sphere sequence.  The pass record asks the outer half to
/// reach oscillation 5 h Lip(u) + 1e-3.
struct OscillationScan {
  std::vector<double> radii;
  std::vector<double> oscillation;
  std::vector<double> best_sequence;  // radii achieving successive minima
  CheckRecord record;
};

OscillationScan oscillation_scan(const GridField& u, const std::vector<double>& radii);

/// Weighted boundary flux w(R) = R log R int_{dB(R)} |grad u|^2, the Green
/// identity over B(R), and the R log R growth bound for the circle means of
/// phi^2.
struct BoundaryScan {
  std::vector<std::pair<double, double>> flux_series;  // (R, w(R))
  std::vector<CheckRecord> records;
};

BoundaryScan boundary_scan(const GridField& u, const GridField& phi,
                           const std::vector<double>& radii);

/// Annular mean estimate: the increment of sqrt(mean of phi^2) between two
/// circles is controlled by the annulus Dirichlet integral.
std::vector<CheckRecord> annular_mean_check(const GridField& phi,
                                            const std::vector<std::pair<double, double>>& pairs);

/// Pohozaev balance over growing balls: identity residuals per radius, the
/// decay of Psi(R) = int_{B(R)} F(u), and the R^2 calibration slope.
struct PohozaevScan {
  std::vector<std::pair<double, double>> psi_series;       // (R, Psi(R))
  std::vector<std::pair<double, double>> boundary_series;  // (R, h(R))
  std::vector<std::pair<double, double>> residual_series;  // (R, identity residual)
  double ell = 0.0;                                        // lim Psi(R)/R^2 estimate
  std::vector<CheckRecord> records;
};

PohozaevScan pohozaev_scan(const FlowCase& flow, const std::vector<double>& radii);

/// Near-zero set of the velocity with 8-connectivity labeling.  Components
/// touching the boundary ring represent far-field decay, not stagnation, and
/// are dropped (unless the set covers essentially the whole grid).
struct StagnationAnalysis {
  int components = 0;
  std::vector<int> labels;  // n*n, -1 outside, component id otherwise
  bool connected = false;
  bool whole_plane = false;
  double tol_v = 0.0;
};

StagnationAnalysis stagnation_analysis(const VectorFieldGrid& v, double tol_v = 0.0);

/// Bernoulli-driven reconstruction of the nonlinearity: per level, contour
/// extraction, constancy of B along the contour, F(c) = -mean B on the
/// contour, f by centered differences in c, and the endpoint value from
/// -lap u at the deepest stagnation cell.
struct FReconstruction {
  std::vector<std::pair<double, double>> f_table;
  std::vector<std::pair<double, double>> F_table;
  double f_at_max = 0.0;
  double residual_sup = 0.0;
  std::vector<CheckRecord> records;
};

FReconstruction reconstruct_f(const GridField& u, const GridField& B,
                              const std::vector<double>& levels);

/// Radial-symmetry classification from circle scatter around the stagnation
/// core centroid.
enum class SymmetryClass { radial, locally_symmetric_multi, nonradial };

struct LocalSymmetry {
  SymmetryClass classification = SymmetryClass::nonradial;
  double center_x = 0.0;
  double center_y = 0.0;
  std::vector<std::pair<double, double>> annuli;  // (r_in, r_out)
  RadialProfile profile;                          // around the detected center
};

LocalSymmetry local_symmetry_detect(const GridField& u, const VectorFieldGrid& v);

const char* to_string(SymmetryClass c);

/// Far-field records: the limit estimate (finite / -inf / none), monotone
/// decay of |v|, omega, B on the outer half, the vanishing of the global
/// integrals of omega, B, f(u), F(u), sign and monotonicity of the
/// reconstructed f near the limit, and (radial cases) monotone pressure.
struct AsymptoticsReport {
  enum class LimitFlag { finite, minus_inf, none };
  LimitFlag limit_flag = LimitFlag::finite;
  std::optional<double> limit_estimate;
  std::vector<CheckRecord> records;
};

AsymptoticsReport asymptotics_report(const FlowCase& flow);

/// Summary diagnostics for one flow, as produced by the euler pipeline.
struct FlowDiagnostics {
  double energy = 0.0;
  double total_vorticity = 0.0;
  double total_bernoulli = 0.0;
  double euler_residual_sup = 0.0;
  double div_residual_sup = 0.0;
  double e2_residual_sup = 0.0;
  int stagnation_components = 0;
  std::optional<double> limit_estimate;
  std::vector<CheckRecord> records;
};

FlowDiagnostics run_euler_diagnostics(const FlowCase& flow);

}  // namespace steinerlab
