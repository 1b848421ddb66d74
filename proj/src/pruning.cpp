#include "deg/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "deg/error.hpp"

namespace deg {

namespace {

// alpha * coef < rhs on [0, 1], as a closed interval.
std::optional<Interval> solve_one_sided(const DistPair &edge,
                                        const DistPair &other) {
  const double rhs = edge.ds - other.ds;
  const double coef = other.de - edge.de + edge.ds - other.ds;

  if (std::abs(coef) < kZeroCoefficient) {
    if (rhs > 0.0)
      return Interval{0.0, 1.0};
    return std::nullopt;
  }
  const double ratio = rhs / coef;
  if (coef > 0.0) {
    if (ratio <= 0.0)
      return std::nullopt;
    return Interval{0.0, std::min(1.0, ratio)};
  }
  if (ratio >= 1.0)
    return std::nullopt;
  return Interval{std::max(0.0, ratio), 1.0};
}

std::optional<Interval> solve(const TrianglePair &t) {
  auto a = solve_one_sided(t.xy, t.xz);
  if (!a)
    return a;
  auto b = solve_one_sided(t.xy, t.yz);
  if (!b)
    return b;
  Interval both{std::max(a->lo, b->lo), std::min(a->hi, b->hi)};
  if (both.lo > both.hi)
    return std::nullopt;
  return both;
}

IntervalSet as_set(const std::optional<Interval> &iv) {
  return iv ? IntervalSet{*iv} : IntervalSet::none();
}

} // namespace

IntervalSet prune_range_one_sided(const DistPair &edge, const DistPair &other) {
  return as_set(solve_one_sided(edge, other));
}

IntervalSet prune_range(const TrianglePair &t) { return as_set(solve(t)); }

std::vector<DynamicEdge> drng_prune(const HybridDataset &data,
                                    const ParetoLayers &candidates,
                                    std::size_t max_degree, double min_measure,
                                    DrngStats *stats) {
  if (max_degree < 1)
    throw Error("max degree must be at least 1");
  if (!(min_measure >= 0.0 && min_measure <= 1.0))
    throw Error("minimum active measure must lie in [0, 1]");

  struct Selected {
    ParetoEntry entry;
    std::vector<Interval> pruned;
    // Distances to the neighbors selected before this one, in order.
    std::vector<DistPair> to_earlier;
  };
  std::vector<Selected> selected;
  std::size_t evals = 0, rejected = 0, back_pruned = 0;

  for (const auto &layer : candidates.layers) {
    for (const auto &x : layer) {
      if (selected.size() >= max_degree)
        break;
      std::vector<Interval> pruned;
      std::vector<DistPair> to_earlier;
      to_earlier.reserve(selected.size());
      for (const auto &y : selected) {
        DistPair xy = dist_pair(data, x.node, y.entry.node);
        ++evals;
        to_earlier.push_back(xy);
        if (auto r = solve({x.dist(), y.entry.dist(), xy}))
          pruned.push_back(*r);
      }
      if (IntervalSet(pruned).complement().measure() >= min_measure)
        selected.push_back({x, std::move(pruned), std::move(to_earlier)});
      else
        ++rejected;
    }
    if (selected.size() >= max_degree)
      break;
  }

  // Back pass: later neighbors may be nearer to the focal node for some
  // alpha and prune an earlier edge there.
  std::vector<bool> kept(selected.size(), false);
  std::vector<DynamicEdge> edges_rev;
  for (std::size_t i = selected.size(); i-- > 0;) {
    auto &x = selected[i];
    for (std::size_t j = i + 1; j < selected.size(); ++j) {
      if (!kept[j])
        continue;
      const auto &y = selected[j];
      if (auto r = solve({x.entry.dist(), y.entry.dist(), y.to_earlier[i]}))
        x.pruned.push_back(*r);
    }
    auto active = IntervalSet(std::move(x.pruned)).complement();
    if (active.measure() >= min_measure) {
      kept[i] = true;
      edges_rev.push_back({x.entry.node, std::move(active)});
    } else {
      ++back_pruned;
    }
  }

  if (stats) {
    stats->distance_evals += evals;
    stats->rejected += rejected;
    stats->back_pruned += back_pruned;
  }
  return {edges_rev.rbegin(), edges_rev.rend()};
}

} // namespace deg
