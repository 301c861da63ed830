#include "steinerlab/steiner2d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "steinerlab/grid_ops.hpp"
#include "steinerlab/parallel.hpp"

namespace steinerlab {

namespace {

// Row section {x : row[x] > c} as sorted open intervals.  Crossings are
// interpolated linearly between samples; sections reaching the first or last
// sample are clipped at the domain edge.
std::vector<Interval> row_superlevel(std::span<const double> row, double c, double x0,
                                     double h) {
  std::vector<Interval> out;
  const int n = static_cast<int>(row.size());
  bool inside = row[0] > c;
  double start = x0;
  for (int i = 1; i < n; ++i) {
    bool now = row[i] > c;
    if (now == inside) continue;
    double xc = x0 + h * (i - 1) + h * (c - row[i - 1]) / (row[i] - row[i - 1]);
    if (now) {
      start = xc;
    } else if (xc > start) {
      out.emplace_back(start, xc);
    }
    inside = now;
  }
  if (inside) {
    double xe = x0 + h * (n - 1);
    if (xe > start) out.emplace_back(start, xe);
  }
  return out;
}

}  // namespace

std::vector<IntervalSet> superlevel_rows(const GridField& u, double c) {
  const int n = u.size();
  std::vector<IntervalSet> rows(n);
  parallel_for(0, n, [&](int j) {
    rows[j] = IntervalSet(row_superlevel(u.row(j), c, -u.half_width(), u.spacing()));
  });
  return rows;
}

double superlevel_measure(const GridField& u, double c) {
  double total = 0.0;
  for (const IntervalSet& s : superlevel_rows(u, c)) total += s.measure();
  return total * u.spacing();
}

LevelStack build_level_stack(const GridField& u, const std::vector<double>& levels) {
  LevelStack stack;
  stack.levels = levels;
  stack.per_row.reserve(levels.size());
  for (double c : levels) stack.per_row.push_back(superlevel_rows(u, c));
  return stack;
}

namespace {

// Reconstruction of one row of u^t from its flowed sections.
//
// level_values[k] is the level of sets[k]; sets are nested decreasing in k
// (sets[0] is the floor section {u > floor}).  The value at a sample x inside
// sets[k] but outside sets[k+1] interpolates linearly in the level between
// the bracketing interval endpoints: interval endpoints are continuous in c,
// so this reduces the staircase error from O(gap) to O(gap^2) on smooth
// profiles.
class RowReconstructor {
 public:
  RowReconstructor(const std::vector<IntervalSet>& sets,
                   const std::vector<double>& level_values, double floor_value,
                   double gap)
      : sets_(sets), levels_(level_values), floor_(floor_value), gap_(gap) {}

  void run(double x0, double h, int n, double* out) const {
    std::vector<int> top(n, -1);
    for (int k = 0; k < static_cast<int>(sets_.size()); ++k) {
      for (const Interval& iv : sets_[k].intervals()) {
        // samples with x0 + i*h strictly inside (a, b)
        int lo = static_cast<int>(std::ceil((iv.a - x0) / h));
        int hi = static_cast<int>(std::floor((iv.b - x0) / h));
        lo = std::max(lo, 0);
        hi = std::min(hi, n - 1);
        for (int i = lo; i <= hi; ++i) {
          double x = x0 + i * h;
          if (iv.contains(x)) top[i] = k;
        }
      }
    }
    for (int i = 0; i < n; ++i) {
      out[i] = value_at(x0 + i * h, top[i]);
    }
  }

 private:
  double level_of(int k) const { return levels_[k]; }

  double value_at(double x, int k) const {
    if (k < 0) return floor_;
    const double ck = level_of(k);
    const bool has_next = (k + 1 < static_cast<int>(sets_.size())) && !sets_[k + 1].empty();
    const double gap = gap_;
    if (gap <= 0.0) return ck;

    const Interval* host = containing(sets_[k], x);
    if (host == nullptr) return ck;

    if (!has_next) return ck + gap * tent(*host, x);

    // children of host at the next level
    const auto& next = sets_[k + 1].intervals();
    auto first = std::lower_bound(next.begin(), next.end(), host->a,
                                  [](const Interval& iv, double v) { return iv.a < v; });
    auto last = first;
    while (last != next.end() && last->b <= host->b + 1e-12 * std::max(1.0, std::abs(host->b))) {
      ++last;
    }
    if (first == last) return ck + gap * tent(*host, x);

    if (x <= first->a) {
      double span = first->a - host->a;
      return ck + gap * (span > 0.0 ? (x - host->a) / span : 1.0);
    }
    auto back = last;
    --back;
    if (x >= back->b) {
      double span = host->b - back->b;
      return ck + gap * (span > 0.0 ? (host->b - x) / span : 1.0);
    }
    // x sits in a valley between two children (or, numerically, inside one).
    for (auto it = first; it != back; ++it) {
      auto nxt = it;
      ++nxt;
      if (x >= it->b && x <= nxt->a) {
        double width = nxt->a - it->b;
        double frac = width > 0.0 ? 1.0 - 2.0 * std::min(x - it->b, nxt->a - x) / width : 1.0;
        return ck + gap * frac;
      }
    }
    return ck + gap;  // inside a child up to roundoff
  }

  static double tent(const Interval& iv, double x) {
    double half = 0.5 * iv.length();
    return half > 0.0 ? 1.0 - std::abs(x - iv.center()) / half : 0.0;
  }

  static const Interval* containing(const IntervalSet& s, double x) {
    const auto& ivs = s.intervals();
    auto it = std::upper_bound(ivs.begin(), ivs.end(), x,
                               [](double v, const Interval& iv) { return v < iv.a; });
    if (it == ivs.begin()) return nullptr;
    --it;
    return it->contains(x) ? &*it : nullptr;
  }

  const std::vector<IntervalSet>& sets_;
  const std::vector<double>& levels_;
  double floor_;
  double gap_;
};

// Symmetrize every row of w along +x through K uniform levels.
GridField symmetrize_rows(const GridField& w, double t, int K, double* gap_out) {
  const int n = w.size();
  const double x0 = -w.half_width();
  const double h = w.spacing();
  const double floor_value = w.boundary_ring_mean();
  const double umax = w.max_value();
  *gap_out = 0.0;
  if (!(umax > floor_value)) return w;  // nothing above the floor

  const double gap = (umax - floor_value) / K;
  *gap_out = gap;
  std::vector<double> level_values(K + 1);
  level_values[0] = floor_value;
  for (int k = 1; k <= K; ++k) level_values[k] = floor_value + k * gap;

  // Admissibility: the lowest true level must be compactly contained in x.
  const double c0 = level_values[1];
  for (int j = 0; j < n; ++j) {
    if (w(0, j) > c0 || w(n - 1, j) > c0) {
      throw std::runtime_error(
          "symmetrize_function: unbounded superlevel (section of the lowest "
          "level touches the grid boundary)");
    }
  }

  GridField out(w.half_width(), n);
  parallel_for(0, n, [&](int j) {
    auto row = w.row(j);
    std::vector<IntervalSet> flowed;
    std::vector<double> flowed_levels;
    flowed.reserve(K + 1);
    for (int k = 0; k <= K; ++k) {
      std::vector<Interval> raw = row_superlevel(row, level_values[k], x0, h);
      if (raw.empty() && k > 0) break;  // nested: higher levels are empty too
      flowed.push_back(flow_set(IntervalSet(std::move(raw)), t));
      flowed_levels.push_back(level_values[k]);
    }
    if (flowed.empty() || flowed[0].empty()) {
      for (int i = 0; i < n; ++i) out(i, j) = floor_value;
      return;
    }
    RowReconstructor rec(flowed, flowed_levels, floor_value, gap);
    rec.run(x0, h, n, &out.values()[static_cast<std::size_t>(j) * n]);
  });
  return out;
}

}  // namespace

SymmetrizationResult symmetrize_function(const GridField& u, double t, double dir_x,
                                         double dir_y, const SymmetrizationOptions& opts) {
  if (t < 0.0) throw std::invalid_argument("symmetrize_function: t >= 0 required");
  if (opts.levels < 64) throw std::invalid_argument("symmetrize_function: levels >= 64 required");
  const double norm = std::hypot(dir_x, dir_y);
  if (!(norm > 0.0)) throw std::invalid_argument("symmetrize_function: zero direction");
  dir_x /= norm;
  dir_y /= norm;

  SymmetrizationResult res{u, t, dir_x, dir_y, opts.levels, 0.0};
  if (t == 0.0 && !opts.force_level_path) return res;  // identity fast path

  const double angle = std::atan2(dir_y, dir_x);
  const bool rotated = std::abs(angle) > 1e-14;
  GridField work = rotated ? rotate_resample(u, -angle) : u;

  double gap = 0.0;
  GridField sym = symmetrize_rows(work, t, opts.levels, &gap);
  res.max_level_gap = gap;
  res.field = rotated ? rotate_resample(sym, angle) : std::move(sym);
  return res;
}

TruncationPair truncate_field(const GridField& u, double m) {
  if (!std::isfinite(m)) throw std::invalid_argument("truncate_field: m must be finite");
  GridField g(u.half_width(), u.size());
  GridField h(u.half_width(), u.size());
  const auto& v = u.values();
  for (std::size_t k = 0; k < v.size(); ++k) {
    double gk = std::max(v[k] - m, 0.0);
    g.values()[k] = gk;
    h.values()[k] = v[k] - gk;  // equals min(v, m); the sum is exact
  }
  return TruncationPair{m, std::move(g), std::move(h)};
}

}  // namespace steinerlab
