#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "deg/graph.hpp"
#include "deg/hybrid.hpp"

namespace deg {

/// A candidate with its normalized distances to a focal point.
struct ParetoEntry {
  NodeId node = 0;
  double de = 0.0;
  double ds = 0.0;

  DistPair dist() const { return {de, ds}; }

  friend bool operator==(const ParetoEntry &, const ParetoEntry &) = default;
};

/// a dominates b: no worse in both distances, strictly better in one.
inline bool dominates(const ParetoEntry &a, const ParetoEntry &b) {
  return a.de <= b.de && a.ds <= b.ds && (a.de < b.de || a.ds < b.ds);
}

/// Skyline layers, nearest first. Each layer is ordered by ds ascending
/// (and therefore de descending; only exact duplicates share a de value).
struct ParetoLayers {
  std::vector<std::vector<ParetoEntry>> layers;

  std::size_t total() const;
  bool empty() const { return layers.empty(); }

  /// All entries in layer order.
  std::vector<ParetoEntry> flatten() const;
};

/// Peels successive skylines from `candidates` until adding the next layer
/// would bring the total to `bound` or more. If the first layer alone
/// reaches the bound, its first max(1, bound - 1) entries in sweep order are
/// kept. Candidates must be unique by node id.
ParetoLayers find_pf(std::vector<ParetoEntry> candidates, std::size_t bound);

struct GpsStats {
  std::size_t distance_evals = 0;
  std::size_t expansions = 0;
  std::size_t iterations = 0;
};

/// Greedy Pareto frontier search: approximates the multi-layer skyline of
/// `focal` over the nodes reachable from `seeds` in `graph`, by repeatedly
/// expanding the unexplored nodes of the nearest layer that has any. Edge
/// active ranges are ignored. Nodes without adjacency are still valid
/// candidates; `graph` only needs entries for ids reachable from the seeds.
ParetoLayers gps(const DynamicGraph &graph, const HybridDataset &data,
                 const HybridPoint &focal, std::span<const NodeId> seeds,
                 std::size_t bound, GpsStats *stats = nullptr);

} // namespace deg
