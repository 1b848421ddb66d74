#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "deg/graph.hpp"
#include "deg/hybrid.hpp"
#include "deg/pareto.hpp"
#include "deg/pruning.hpp"

namespace deg {

struct BuildParams {
  std::size_t max_degree = 40;       // M
  std::size_t ef_construction = 200;
  double min_active = 0.1;           // th
  /// Insert in dataset order when unset, else in a shuffle seeded by this.
  std::optional<std::uint64_t> shuffle_seed;

  void validate() const;
};

struct IndexMeta {
  std::uint32_t max_degree = 0;
  std::uint32_t ef_construction = 0;
  double min_active = 0.0;
  double e_max = 1.0;
  double s_max = 1.0;
  double norm_eps = 0.0;
  std::uint32_t e_dim = 0;
  std::uint32_t s_dim = 0;
  std::uint32_t n = 0;

  friend bool operator==(const IndexMeta &, const IndexMeta &) = default;
};

/// Single-layer inverse skyline of distances to the centroid: the members
/// that no other inserted node exceeds in both modal distances.
class SeedFrontier {
public:
  /// Returns true if `id` joined the frontier.
  bool insert(NodeId id, DistPair to_centroid);

  /// Member ids in ascending order.
  std::vector<NodeId> ids() const;
  std::size_t size() const { return members_.size(); }

private:
  struct Member {
    NodeId id;
    DistPair d;
  };
  // Sorted by ds ascending.
  std::vector<Member> members_;
};

/// a reverse-dominates b: at least as far in both, strictly farther in one.
inline bool reverse_dominates(const DistPair &a, const DistPair &b) {
  return a.de >= b.de && a.ds >= b.ds && (a.de > b.de || a.ds > b.ds);
}

/// Immutable dynamic edge graph with its entry seeds.
class DegIndex {
public:
  DegIndex() = default;
  DegIndex(IndexMeta meta, Centroid centroid, std::vector<NodeId> seeds,
           DynamicGraph graph);

  const IndexMeta &meta() const { return meta_; }
  const Centroid &centroid() const { return centroid_; }
  const std::vector<NodeId> &seeds() const { return seeds_; }
  const DynamicGraph &graph() const { return graph_; }
  std::span<const DynamicEdge> edges(NodeId id) const { return graph_[id]; }
  std::size_t size() const { return graph_.size(); }
  std::size_t edge_count() const;

  /// Same adjacency with every active range set to [0, 1].
  DegIndex with_full_ranges() const;

  /// Throws unless `data` has the shape and normalization this index was
  /// built with.
  void check_compatible(const HybridDataset &data) const;

  /// Contiguous copy of the adjacency used by search.
  struct PackedEdge {
    NodeId target;
    std::uint32_t range_begin;
    std::uint32_t range_end;
  };
  std::span<const PackedEdge> packed_edges(NodeId id) const {
    return {packed_.data() + offsets_[id], packed_.data() + offsets_[id + 1]};
  }
  bool packed_contains(const PackedEdge &e, double alpha) const {
    for (std::uint32_t i = e.range_begin; i < e.range_end; ++i) {
      if (alpha < ranges_[i].lo)
        return false;
      if (alpha <= ranges_[i].hi)
        return true;
    }
    return false;
  }

  /// Edges of `id` whose range meets the weight bin holding `alpha`. The
  /// first span covers the whole bin; the second still needs packed_contains.
  static constexpr std::size_t kAlphaBins = 16;
  struct BinnedEdges {
    std::span<const std::uint32_t> covering;
    std::span<const std::uint32_t> partial;
  };
  BinnedEdges binned_edges(NodeId id, double alpha) const {
    auto b = static_cast<std::size_t>(alpha * kAlphaBins);
    const std::size_t slot = id * kAlphaBins + std::min(b, kAlphaBins - 1);
    const std::uint32_t *base = bin_edges_.data();
    return {{base + bin_offsets_[slot], base + bin_split_[slot]},
            {base + bin_split_[slot], base + bin_offsets_[slot + 1]}};
  }
  const PackedEdge &packed_edge(std::uint32_t i) const { return packed_[i]; }

  friend bool operator==(const DegIndex &a, const DegIndex &b) {
    return a.meta_ == b.meta_ && a.centroid_ == b.centroid_ &&
           a.seeds_ == b.seeds_ && a.graph_ == b.graph_;
  }

private:
  void pack();

  IndexMeta meta_;
  Centroid centroid_;
  std::vector<NodeId> seeds_;
  DynamicGraph graph_;
  std::vector<std::uint32_t> offsets_{0};
  std::vector<PackedEdge> packed_;
  std::vector<Interval> ranges_;
  std::vector<std::uint32_t> bin_offsets_{0};
  std::vector<std::uint32_t> bin_split_;
  std::vector<std::uint32_t> bin_edges_;
};

struct BuildStats {
  GpsStats gps;
  DrngStats drng;
  std::size_t reverse_updates = 0;
};

/// Incremental construction state. `build` drives it over the whole dataset;
/// the individual steps are exposed for testing.
class DegBuilder {
public:
  DegBuilder(const HybridDataset &data, BuildParams params);

  /// Inserts one node: candidate search, pruning, reverse edges, seeds.
  void insert(NodeId x);

  /// Re-prunes y's adjacency with x added as a candidate.
  void reverse_update(NodeId y, NodeId x);

  /// Adds x to the seed frontier if nothing inserted so far lies farther
  /// from the centroid in both distances.
  void update_seeds(NodeId x);

  const DynamicGraph &graph() const { return graph_; }
  DynamicGraph &mutable_graph() { return graph_; }
  std::vector<NodeId> seeds() const { return seeds_.ids(); }
  const Centroid &centroid() const { return centroid_; }
  const BuildStats &stats() const { return stats_; }

  DegIndex finish() &&;

private:
  const HybridDataset &data_;
  BuildParams params_;
  Centroid centroid_;
  DynamicGraph graph_;
  SeedFrontier seeds_;
  std::size_t inserted_ = 0;
  BuildStats stats_;
};

DegIndex build(const HybridDataset &data, const BuildParams &params,
               BuildStats *stats = nullptr);

/// Insertion order used by `build`.
std::vector<NodeId> insertion_order(std::size_t n, const BuildParams &params);

// DEG1 layout, little-endian:
//   "DEG1" | u32 version (1)
//   meta:  u32 M | u32 ef_construction | f64 th | f64 e_max | f64 s_max |
//          f64 norm_eps | u32 d | u32 m | u32 n | d x f32 centroid.e |
//          m x f32 centroid.s
//   seeds: u32 count | count x u32 id
//   nodes: n x (u16 edge count | per edge: u32 target | u16 interval count |
//          per interval: u16 lo | u16 hi)
// Endpoints are stored on a 0..10000 grid, lo rounded down and hi up.

inline constexpr std::uint32_t kIndexVersion = 1;
inline constexpr std::uint32_t kRangeGrid = 10000;

/// Quantized form of a range as written to disk (widened, merged).
std::vector<std::pair<std::uint16_t, std::uint16_t>>
quantize_range(const IntervalSet &range);

std::vector<char> serialize(const DegIndex &index);
DegIndex deserialize(std::vector<char> bytes, const std::string &name = "index");

void save(const DegIndex &index, const std::string &path);
DegIndex load(const std::string &path);

} // namespace deg
