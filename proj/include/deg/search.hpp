#pragma once

#include <cstddef>
#include <vector>

#include "deg/graph.hpp"
#include "deg/hybrid.hpp"
#include "deg/index.hpp"

namespace deg {

struct SearchParams {
  std::size_t ef_search = 100;
  bool early_stop = true;
  bool collect_stats = true;
};

struct SearchStats {
  std::size_t distance_evals_full = 0;
  std::size_t distance_evals_partial = 0;
  std::size_t nodes_popped = 0;
  std::size_t edges_skipped_by_range = 0;

  SearchStats &operator+=(const SearchStats &o) {
    distance_evals_full += o.distance_evals_full;
    distance_evals_partial += o.distance_evals_partial;
    nodes_popped += o.nodes_popped;
    edges_skipped_by_range += o.edges_skipped_by_range;
    return *this;
  }
};

struct Neighbor {
  NodeId id = 0;
  double dist = 0.0;

  friend bool operator==(const Neighbor &, const Neighbor &) = default;
};

struct SearchResult {
  /// Ascending by distance, ties by id.
  std::vector<Neighbor> neighbors;
  /// Fewer than k nodes were reachable.
  bool underfilled = false;
  SearchStats stats;
};

/// Beam search that only follows edges whose active range contains the
/// query weight. Starts from every seed of the index.
SearchResult search(const DegIndex &index, const HybridDataset &data,
                    const HybridQuery &query, const SearchParams &params);

/// The same beam search over a graph with static edges.
SearchResult search_fixed_graph(const FixedGraph &graph,
                                const HybridDataset &data,
                                const HybridQuery &query,
                                const SearchParams &params);

/// Static view of an index: same adjacency and entry points, ranges dropped.
FixedGraph to_fixed_graph(const DegIndex &index);

} // namespace deg
