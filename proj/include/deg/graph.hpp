#pragma once

#include <vector>

#include "deg/hybrid.hpp"
#include "deg/interval_set.hpp"

namespace deg {

/// Directed edge that is traversable only for query weights in `range`.
struct DynamicEdge {
  NodeId target = 0;
  IntervalSet range;

  friend bool operator==(const DynamicEdge &, const DynamicEdge &) = default;
};

using AdjacencyList = std::vector<DynamicEdge>;
using DynamicGraph = std::vector<AdjacencyList>;

} // namespace deg

namespace deg {

/// Plain proximity graph with static edges, used by the fixed-weight
/// baseline.
struct FixedGraph {
  std::vector<std::vector<NodeId>> adjacency;
  std::vector<NodeId> entry_points;
  double build_alpha = 0.5;

  std::size_t size() const { return adjacency.size(); }
};

} // namespace deg
