#include "steinerlab/grid_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "steinerlab/parallel.hpp"

namespace steinerlab {

namespace {

// d/dx along a row of samples, second order everywhere.
inline double d1(double fm, double f0, double fp, double h) {
  (void)f0;
  return (fp - fm) / (2.0 * h);
}

inline double d1_forward(double f0, double f1, double f2, double h) {
  return (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h);
}

inline double d2_forward(double f0, double f1, double f2, double f3, double h) {
  return (2.0 * f0 - 5.0 * f1 + 4.0 * f2 - f3) / (h * h);
}

}  // namespace

VectorFieldGrid gradient(const GridField& f) {
  const int n = f.size();
  const double h = f.spacing();
  GridField gx(f.half_width(), n), gy(f.half_width(), n);
  parallel_for(0, n, [&](int j) {
    for (int i = 0; i < n; ++i) {
      if (i == 0) {
        gx(i, j) = d1_forward(f(0, j), f(1, j), f(2, j), h);
      } else if (i == n - 1) {
        gx(i, j) = -d1_forward(f(n - 1, j), f(n - 2, j), f(n - 3, j), h);
      } else {
        gx(i, j) = d1(f(i - 1, j), f(i, j), f(i + 1, j), h);
      }
      if (j == 0) {
        gy(i, j) = d1_forward(f(i, 0), f(i, 1), f(i, 2), h);
      } else if (j == n - 1) {
        gy(i, j) = -d1_forward(f(i, n - 1), f(i, n - 2), f(i, n - 3), h);
      } else {
        gy(i, j) = d1(f(i, j - 1), f(i, j), f(i, j + 1), h);
      }
    }
  });
  return VectorFieldGrid(std::move(gx), std::move(gy));
}

VectorFieldGrid perp_gradient(const GridField& f) {
  VectorFieldGrid g = gradient(f);
  GridField vx = g.y;
  for (double& v : vx.values()) v = -v;
  return VectorFieldGrid(std::move(vx), std::move(g.x));
}

GridField laplacian(const GridField& f) {
  const int n = f.size();
  const double h = f.spacing();
  GridField out(f.half_width(), n);
  parallel_for(0, n, [&](int j) {
    for (int i = 0; i < n; ++i) {
      double dxx, dyy;
      if (i == 0) {
        dxx = d2_forward(f(0, j), f(1, j), f(2, j), f(3, j), h);
      } else if (i == n - 1) {
        dxx = d2_forward(f(n - 1, j), f(n - 2, j), f(n - 3, j), f(n - 4, j), h);
      } else {
        dxx = (f(i - 1, j) - 2.0 * f(i, j) + f(i + 1, j)) / (h * h);
      }
      if (j == 0) {
        dyy = d2_forward(f(i, 0), f(i, 1), f(i, 2), f(i, 3), h);
      } else if (j == n - 1) {
        dyy = d2_forward(f(i, n - 1), f(i, n - 2), f(i, n - 3), f(i, n - 4), h);
      } else {
        dyy = (f(i, j - 1) - 2.0 * f(i, j) + f(i, j + 1)) / (h * h);
      }
      out(i, j) = dxx + dyy;
    }
  });
  return out;
}

GridField divergence(const VectorFieldGrid& v) {
  if (!v.x.same_grid(v.y)) {
    throw std::invalid_argument("divergence: mismatched grids");
  }
  VectorFieldGrid gx = gradient(v.x);
  VectorFieldGrid gy = gradient(v.y);
  GridField out(v.x.half_width(), v.x.size());
  const std::size_t total = out.values().size();
  for (std::size_t k = 0; k < total; ++k) {
    out.values()[k] = gx.x.values()[k] + gy.y.values()[k];
  }
  return out;
}

namespace {

// Fraction of the cell [x0,x0+h]x[y0,y0+h] inside the region, by 4x4
// midpoint subsampling.
double cell_coverage(const Region& region, double x0, double y0, double h) {
  if (region.kind == Region::Kind::all) return 1.0;
  int inside = 0;
  for (int a = 0; a < 4; ++a) {
    double px = x0 + (a + 0.5) * h / 4.0;
    for (int b = 0; b < 4; ++b) {
      double py = y0 + (b + 0.5) * h / 4.0;
      double r = std::hypot(px, py);
      if (region.kind == Region::Kind::ball) {
        if (r <= region.r2) ++inside;
      } else {
        if (r > region.r1 && r <= region.r2) ++inside;
      }
    }
  }
  return inside / 16.0;
}

// Quick reject/accept bounds on the distance from the origin to a cell.
void cell_radius_range(double x0, double y0, double h, double& rmin, double& rmax) {
  double x1 = x0 + h, y1 = y0 + h;
  double ax = (x0 > 0.0) ? x0 : (x1 < 0.0 ? -x1 : 0.0);
  double ay = (y0 > 0.0) ? y0 : (y1 < 0.0 ? -y1 : 0.0);
  rmin = std::hypot(ax, ay);
  rmax = std::hypot(std::max(std::abs(x0), std::abs(x1)),
                    std::max(std::abs(y0), std::abs(y1)));
}

}  // namespace

double integrate(const GridField& f, const Region& region) {
  const double L = f.half_width();
  if (region.kind == Region::Kind::ball) {
    if (!(region.r2 > 0.0) || region.r2 > L) {
      throw std::invalid_argument("integrate: ball exceeds domain");
    }
  } else if (region.kind == Region::Kind::annulus) {
    if (!(region.r1 >= 0.0) || !(region.r1 < region.r2) || region.r2 > L) {
      throw std::invalid_argument("integrate: annulus exceeds domain");
    }
  }

  const int n = f.size();
  const double h = f.spacing();
  std::vector<double> row_sums(n - 1, 0.0);
  parallel_for(0, n - 1, [&](int j) {
    double y0 = f.y(j);
    double acc = 0.0;
    for (int i = 0; i < n - 1; ++i) {
      double x0 = f.x(i);
      double w = 1.0;
      if (region.kind != Region::Kind::all) {
        double rmin, rmax;
        cell_radius_range(x0, y0, h, rmin, rmax);
        bool fully_in, fully_out;
        if (region.kind == Region::Kind::ball) {
          fully_in = rmax <= region.r2;
          fully_out = rmin > region.r2;
        } else {
          fully_in = rmin > region.r1 && rmax <= region.r2;
          fully_out = rmax <= region.r1 || rmin > region.r2;
        }
        if (fully_out) continue;
        w = fully_in ? 1.0 : cell_coverage(region, x0, y0, h);
        if (w == 0.0) continue;
      }
      double mean = 0.25 * (f(i, j) + f(i + 1, j) + f(i, j + 1) + f(i + 1, j + 1));
      acc += w * mean;
    }
    row_sums[j] = acc;
  });
  double total = 0.0;
  for (double s : row_sums) total += s;
  return total * h * h;
}

CircleTrace circle_trace(const GridField& f, double radius, int n_theta, double cx,
                         double cy) {
  if (n_theta < 64) throw std::invalid_argument("circle_trace: n_theta >= 64 required");
  const double L = f.half_width();
  const double reach = std::max(std::abs(cx), std::abs(cy)) + radius;
  if (!(radius > 0.0) || reach + f.spacing() > L) {
    throw std::out_of_range("circle_trace: circle outside domain");
  }
  CircleTrace tr;
  tr.values.resize(n_theta);
  double sum = 0.0;
  double vmin = std::numeric_limits<double>::infinity();
  double vmax = -vmin;
  for (int k = 0; k < n_theta; ++k) {
    double th = 2.0 * std::numbers::pi * k / n_theta;
    double v = f.sample(cx + radius * std::cos(th), cy + radius * std::sin(th));
    tr.values[k] = v;
    sum += v;
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  tr.mean = sum / n_theta;
  tr.oscillation = vmax - vmin;
  tr.line_integral = sum * (2.0 * std::numbers::pi * radius / n_theta);
  return tr;
}

RadialProfile radial_profile(const GridField& f, double cx, double cy) {
  const double L = f.half_width();
  const double h = f.spacing();
  const double rc = std::hypot(cx, cy);
  if (rc >= L) throw std::invalid_argument("radial_profile: center outside domain");
  const int kmax = static_cast<int>(std::floor((L - rc) / h)) - 1;
  RadialProfile prof;
  for (int k = 1; k <= kmax; ++k) {
    double r = k * h;
    int n_theta = std::max<int>(64, static_cast<int>(std::ceil(2.0 * std::numbers::pi * r / h)));
    CircleTrace tr = circle_trace(f, r, n_theta, cx, cy);
    double var = 0.0;
    for (double v : tr.values) var += (v - tr.mean) * (v - tr.mean);
    var /= tr.values.size();
    prof.r.push_back(r);
    prof.values.push_back(tr.mean);
    prof.scatter.push_back(std::sqrt(var));
  }
  return prof;
}

GridField rotate_resample(const GridField& f, double angle) {
  const int n = f.size();
  const double L = f.half_width();
  const double fill = f.boundary_ring_mean();
  const double c = std::cos(angle), s = std::sin(angle);
  GridField out(L, n);
  parallel_for(0, n, [&](int j) {
    double py = out.y(j);
    for (int i = 0; i < n; ++i) {
      double px = out.x(i);
      // source point R_{-angle} * (px, py)
      double sx = c * px + s * py;
      double sy = -s * px + c * py;
      if (std::abs(sx) <= L && std::abs(sy) <= L) {
        out(i, j) = f.sample(sx, sy);
      } else {
        out(i, j) = fill;
      }
    }
  });
  return out;
}

}  // namespace steinerlab
