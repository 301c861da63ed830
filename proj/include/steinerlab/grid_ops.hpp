#pragma once

#include <vector>

#include "steinerlab/grid.hpp"

namespace steinerlab {

// Second-order stencils: central differences inside, one-sided at the
// boundary.  Fields of interest decay toward the boundary, so the one-sided
// rows are subdominant.

VectorFieldGrid gradient(const GridField& f);
/// (grad f)^perp = (-df/dy, df/dx).
VectorFieldGrid perp_gradient(const GridField& f);
GridField laplacian(const GridField& f);
GridField divergence(const VectorFieldGrid& v);

/// Integration region: the full square, a centered ball, or a centered
/// annulus.  Cells cut by the circular boundary are weighted by their
/// sampled sub-area (4x4 subsampling per cell).
struct Region {
  enum class Kind { all, ball, annulus };
  Kind kind = Kind::all;
  double r1 = 0.0;
  double r2 = 0.0;

  static Region all() { return Region{}; }
  static Region ball(double radius) { return Region{Kind::ball, 0.0, radius}; }
  static Region annulus(double inner, double outer) {
    return Region{Kind::annulus, inner, outer};
  }
};

/// Composite trapezoidal quadrature of f over the region.
double integrate(const GridField& f, const Region& region = Region::all());

/// Bilinear samples of f on the circle of radius R about `center`.
struct CircleTrace {
  std::vector<double> values;
  double oscillation = 0.0;
  double mean = 0.0;
  double line_integral = 0.0;
};

CircleTrace circle_trace(const GridField& f, double radius, int n_theta,
                         double cx = 0.0, double cy = 0.0);

/// Circle means of f at radii k*h about `center`, with the per-radius
/// standard deviation of the circle samples as scatter.
struct RadialProfile {
  std::vector<double> r;
  std::vector<double> values;
  std::vector<double> scatter;
};

RadialProfile radial_profile(const GridField& f, double cx = 0.0, double cy = 0.0);

/// Bilinear resampling of f composed with the rotation by -angle.  Sample
/// points falling outside the source square take the boundary-ring mean.
GridField rotate_resample(const GridField& f, double angle);

}  // namespace steinerlab
