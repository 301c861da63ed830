#pragma once

#include <limits>
#include <optional>
#include <vector>

namespace steinerlab {

/// Sentinel for the t = +inf endpoint of the symmetrization flow.
inline constexpr double time_infinity = std::numeric_limits<double>::infinity();

/// Bounded open interval (a, b), a < b.
struct Interval {
  double a;
  double b;

  Interval(double a_, double b_);

  double length() const { return b - a; }
  double center() const { return 0.5 * (a + b); }
  bool contains(double x) const { return a < x && x < b; }
};

/// First time at which two flowed intervals share an endpoint.
struct MergeEvent {
  double time;
  int left_index;
  int right_index;
};

/// Finite union of disjoint bounded open intervals, sorted by left endpoint.
/// Immutable after construction; all flow operations return new sets.
class IntervalSet {
 public:
  IntervalSet() = default;
  explicit IntervalSet(std::vector<Interval> intervals);

  const std::vector<Interval>& intervals() const { return intervals_; }
  std::size_t size() const { return intervals_.size(); }
  bool empty() const { return intervals_.empty(); }

  double measure() const;
  bool contains(double x) const;

  /// Interval-wise containment: every interval of *this lies inside some
  /// interval of `other`.
  bool subset_of(const IntervalSet& other) const;

 private:
  std::vector<Interval> intervals_;
};

/// Flow a single interval: the length is preserved and the center contracts
/// by e^{-t}.  t = time_infinity returns the centered interval.
Interval symmetrize_interval(const Interval& iv, double t);

/// Smallest positive time at which two adjacent flowed intervals touch,
/// solved in closed form (the endpoints are linear in e^{-t}).  Empty for
/// sets with fewer than two intervals.
std::optional<MergeEvent> next_merge_time(const IntervalSet& m);

/// Event-driven evolution: flow until the next merge, fuse the touching
/// intervals into one of summed length, repeat.  Total measure is preserved.
IntervalSet flow_set(const IntervalSet& m, double t);

/// True iff x lies in some open interval of m.
bool set_contains(const IntervalSet& m, double x);

}  // namespace steinerlab
