#include "deg/interval_set.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "deg/error.hpp"

namespace deg {

IntervalSet::IntervalSet(std::initializer_list<Interval> intervals)
    : IntervalSet(std::vector<Interval>(intervals)) {}

IntervalSet::IntervalSet(std::vector<Interval> intervals)
    : intervals_(std::move(intervals)) {
  normalize();
}

void IntervalSet::normalize() {
  for (auto &iv : intervals_) {
    if (std::isnan(iv.lo) || std::isnan(iv.hi) || iv.lo > iv.hi)
      throw Error("invalid interval");
    iv.lo = std::clamp(iv.lo, 0.0, 1.0);
    iv.hi = std::clamp(iv.hi, 0.0, 1.0);
  }
  std::sort(intervals_.begin(), intervals_.end(),
            [](const Interval &a, const Interval &b) {
              return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
            });
  std::vector<Interval> merged;
  merged.reserve(intervals_.size());
  for (const auto &iv : intervals_) {
    if (!merged.empty() && merged.back().hi >= iv.lo)
      merged.back().hi = std::max(merged.back().hi, iv.hi);
    else
      merged.push_back(iv);
  }
  intervals_ = std::move(merged);
}

double IntervalSet::measure() const {
  double total = 0.0;
  for (const auto &iv : intervals_)
    total += iv.length();
  return total;
}

bool IntervalSet::contains(double alpha) const {
  for (const auto &iv : intervals_) {
    if (alpha < iv.lo)
      return false;
    if (alpha <= iv.hi)
      return true;
  }
  return false;
}

void IntervalSet::add(Interval iv) {
  intervals_.push_back(iv);
  normalize();
}

IntervalSet IntervalSet::unite(const IntervalSet &other) const {
  std::vector<Interval> all = intervals_;
  all.insert(all.end(), other.intervals_.begin(), other.intervals_.end());
  return IntervalSet(std::move(all));
}

IntervalSet IntervalSet::intersect(const IntervalSet &other) const {
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  while (i < intervals_.size() && j < other.intervals_.size()) {
    const auto &a = intervals_[i];
    const auto &b = other.intervals_[j];
    double lo = std::max(a.lo, b.lo);
    double hi = std::min(a.hi, b.hi);
    if (lo <= hi)
      out.push_back({lo, hi});
    if (a.hi < b.hi)
      ++i;
    else
      ++j;
  }
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::complement() const {
  std::vector<Interval> out;
  double cursor = 0.0;
  bool open_start = true;
  for (const auto &iv : intervals_) {
    if (iv.lo > cursor || (open_start && iv.lo > 0.0))
      out.push_back({cursor, iv.lo});
    cursor = iv.hi;
    open_start = false;
  }
  if (open_start)
    out.push_back({0.0, 1.0});
  else if (cursor < 1.0)
    out.push_back({cursor, 1.0});
  return IntervalSet(std::move(out));
}

std::string IntervalSet::to_string() const {
  if (intervals_.empty())
    return "{}";
  std::ostringstream os;
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    if (i)
      os << " U ";
    os << '[' << intervals_[i].lo << ", " << intervals_[i].hi << ']';
  }
  return os.str();
}

} // namespace deg
