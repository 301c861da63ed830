#include "steinerlab/interval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace steinerlab {

Interval::Interval(double a_, double b_) : a(a_), b(b_) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("Interval: endpoints must be finite");
  }
  if (!(a < b)) {
    throw std::invalid_argument("Interval: requires a < b");
  }
}

IntervalSet::IntervalSet(std::vector<Interval> intervals)
    : intervals_(std::move(intervals)) {
  std::sort(intervals_.begin(), intervals_.end(),
            [](const Interval& u, const Interval& v) { return u.a < v.a; });
  for (std::size_t k = 1; k < intervals_.size(); ++k) {
    if (intervals_[k].a < intervals_[k - 1].b) {
      throw std::invalid_argument("IntervalSet: intervals must be disjoint");
    }
  }
}

double IntervalSet::measure() const {
  double total = 0.0;
  for (const Interval& iv : intervals_) total += iv.length();
  return total;
}

bool IntervalSet::contains(double x) const {
  // Binary search on the left endpoints, then an open-interval test.
  auto it = std::upper_bound(
      intervals_.begin(), intervals_.end(), x,
      [](double v, const Interval& iv) { return v < iv.a; });
  if (it == intervals_.begin()) return false;
  --it;
  return it->contains(x);
}

bool IntervalSet::subset_of(const IntervalSet& other) const {
  for (const Interval& iv : intervals_) {
    auto it = std::upper_bound(
        other.intervals_.begin(), other.intervals_.end(), iv.a,
        [](double v, const Interval& o) { return v < o.a; });
    bool covered = false;
    if (it != other.intervals_.begin()) {
      --it;
      covered = it->a <= iv.a && iv.b <= it->b;
    }
    if (!covered) return false;
  }
  return true;
}

Interval symmetrize_interval(const Interval& iv, double t) {
  if (t < 0.0) throw std::invalid_argument("symmetrize_interval: t >= 0 required");
  double half = 0.5 * iv.length();
  if (std::isinf(t)) return Interval(-half, half);
  double c = std::exp(-t) * iv.center();
  return Interval(c - half, c + half);
}

namespace {

// Collision time of an adjacent pair: the gap closes when
//   e^{-t} (c_{k+1} - c_k) = (len_k + len_{k+1}) / 2.
// Disjointness guarantees the solution s = e^{-t} lies in (0, 1].
double pair_merge_time(const Interval& left, const Interval& right) {
  double dc = right.center() - left.center();
  double s = 0.5 * (left.length() + right.length()) / dc;
  return std::max(0.0, -std::log(s));
}

}  // namespace

std::optional<MergeEvent> next_merge_time(const IntervalSet& m) {
  const auto& ivs = m.intervals();
  if (ivs.size() < 2) return std::nullopt;
  MergeEvent best{time_infinity, -1, -1};
  for (std::size_t k = 0; k + 1 < ivs.size(); ++k) {
    double t = pair_merge_time(ivs[k], ivs[k + 1]);
    if (t < best.time) {
      best = MergeEvent{t, static_cast<int>(k), static_cast<int>(k) + 1};
    }
  }
  return best;
}

IntervalSet flow_set(const IntervalSet& m, double t) {
  if (t < 0.0) throw std::invalid_argument("flow_set: t >= 0 required");
  if (m.empty() || t == 0.0) return m;

  if (std::isinf(t)) {
    double half = 0.5 * m.measure();
    return IntervalSet({Interval(-half, half)});
  }

  std::vector<Interval> work = m.intervals();
  double remaining = t;
  while (true) {
    if (work.size() == 1) {
      work[0] = symmetrize_interval(work[0], remaining);
      return IntervalSet(std::move(work));
    }

    // Closed-form collision times for every adjacent pair.
    std::vector<double> times(work.size() - 1);
    double tmin = time_infinity;
    for (std::size_t k = 0; k + 1 < work.size(); ++k) {
      times[k] = pair_merge_time(work[k], work[k + 1]);
      tmin = std::min(tmin, times[k]);
    }
    if (tmin > remaining) {
      for (Interval& iv : work) iv = symmetrize_interval(iv, remaining);
      return IntervalSet(std::move(work));
    }

    // Advance to the event and fuse every pair that collides at it
    // (simultaneous collisions merge in one event).
    std::vector<Interval> flowed;
    flowed.reserve(work.size());
    for (const Interval& iv : work) flowed.push_back(symmetrize_interval(iv, tmin));

    const double tol = tmin * 1e-12 + 1e-300;
    std::vector<Interval> merged;
    std::size_t k = 0;
    while (k < flowed.size()) {
      std::size_t j = k;
      double total_len = flowed[k].length();
      while (j + 1 < flowed.size() && times[j] <= tmin + tol) {
        total_len += flowed[j + 1].length();
        ++j;
      }
      if (j == k) {
        merged.push_back(flowed[k]);
      } else {
        // Summed length keeps the measure exact; center from the fused span.
        double c = 0.5 * (flowed[k].a + flowed[j].b);
        merged.push_back(Interval(c - 0.5 * total_len, c + 0.5 * total_len));
      }
      k = j + 1;
    }
    work = std::move(merged);
    remaining -= tmin;
    if (remaining <= 0.0) return IntervalSet(std::move(work));
  }
}

bool set_contains(const IntervalSet& m, double x) { return m.contains(x); }

}  // namespace steinerlab
