#pragma once

#include <functional>
#include <vector>

#include "steinerlab/check.hpp"
#include "steinerlab/flow_cases.hpp"
#include "steinerlab/grid.hpp"
#include "steinerlab/steiner2d.hpp"

namespace steinerlab {

/// Rearrangement axioms for one field: equimeasurability of superlevels,
/// the semigroup law (u^t)^s = u^{t+s}, monotonicity against u plus a
/// nonnegative bump, and Cavalieri's principle for F(w) = w^2 (plus the
/// case primitive when one is supplied).
std::vector<CheckRecord> verify_rearrangement_axioms(
    const GridField& u, double t, double s, const std::vector<double>& levels,
    int K = 256, const std::function<double(double)>& case_primitive = nullptr,
    std::uint64_t seed = 0);

/// Dirichlet energy must not increase: E(u^t) <= E(u) (1 + eps) with
/// eps = 1e-3 + 2/K (the level-quantization allowance).
CheckRecord verify_polya_szego(const GridField& u, double t, int K = 256,
                               double dir_x = 1.0, double dir_y = 0.0);

/// ||u^t - u||_{L2(B(R))} <= 1.05 t R ||d_x u||_{L2(B(R))} for nonnegative u
/// supported in B(R).  Throws if the support escapes the ball.
CheckRecord verify_l2_continuity(const GridField& u, double t, double R, int K = 256);

/// Lemma-style truncation algebra at height m: exact sum identity,
/// commutation of G_m with the flow (when t > 0), and the vanishing of
/// |grad G_m(u)| |grad H_m(u)| off the band {|u - m| <= 2 h Lip(u)}.
std::vector<CheckRecord> verify_truncation_algebra(const GridField& u, double m,
                                                   double t, int K = 256);

/// J(t) = int f(u) (u^t - u) dx for each t; passes when min J(t)/t does not
/// drop below -eps_J with eps_J = 1e-2 ||f(u)||_L1 Lip(u).  Also emits the
/// convexity comparison J(t) <= (E(u^t) - E(u)) / 2.
std::vector<CheckRecord> j_derivative_test(const FlowCase& flow,
                                           const std::vector<double>& t_list,
                                           double dir_x = 1.0, double dir_y = 0.0,
                                           int K = 256);

/// (E(u) - E(u^t)) / t at the smallest t, maximized over directions.  With
/// expect_symmetric the record passes iff the ratio stays below
/// 1e-3 E(u); otherwise the positive value is reported as a diagnostic.
CheckRecord energy_derivative_test(const GridField& u, const std::vector<double>& t_list,
                                   const std::vector<std::pair<double, double>>& directions,
                                   bool expect_symmetric, int K = 512);

/// Discrete max |grad u| (the Lipschitz scale used in tolerance formulas).
double discrete_lipschitz(const GridField& u);

/// Dirichlet energy int |grad u|^2 by the grid quadrature.
double dirichlet_energy(const GridField& u);

}  // namespace steinerlab
