#pragma once

#include <initializer_list>
#include <string>
#include <vector>

namespace deg {

/// Closed interval [lo, hi] inside [0, 1].
struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double length() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }

  friend bool operator==(const Interval &, const Interval &) = default;
};

/// A finite union of closed subintervals of [0, 1], kept sorted and
/// disjoint. Intervals that touch or overlap are merged.
///
/// The complement is taken as the closure of [0, 1] minus the set, so the
/// boundary points of a removed interval belong to both the set and its
/// complement. This is the convention used for edge active ranges: at a
/// pruning boundary the edge stays active.
class IntervalSet {
public:
  IntervalSet() = default;
  IntervalSet(std::initializer_list<Interval> intervals);
  explicit IntervalSet(std::vector<Interval> intervals);

  static IntervalSet full() { return IntervalSet{{0.0, 1.0}}; }
  static IntervalSet none() { return {}; }

  const std::vector<Interval> &intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  std::size_t size() const { return intervals_.size(); }

  double measure() const;
  bool contains(double alpha) const;

  IntervalSet unite(const IntervalSet &other) const;
  IntervalSet intersect(const IntervalSet &other) const;
  IntervalSet complement() const;

  /// In-place union with a single interval.
  void add(Interval iv);

  std::string to_string() const;

  friend bool operator==(const IntervalSet &, const IntervalSet &) = default;

private:
  void normalize();

  std::vector<Interval> intervals_;
};

} // namespace deg
