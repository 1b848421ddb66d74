#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "deg/graph.hpp"
#include "deg/hybrid.hpp"
#include "deg/pareto.hpp"
#include "deg/search.hpp"

namespace deg {

/// Exact top-k rows, one per query.
struct GroundTruth {
  std::size_t k = 0;
  std::vector<std::vector<Neighbor>> rows;
};

/// Exact top-k under the hybrid distance by linear scan, ties by id.
std::vector<Neighbor> brute_force_topk(const HybridDataset &data,
                                       const HybridQuery &query, std::size_t k);

GroundTruth brute_force_ground_truth(const HybridDataset &data,
                                     const std::vector<HybridQuery> &queries,
                                     std::size_t k);

using UndirectedEdge = std::pair<NodeId, NodeId>; // first < second

inline constexpr std::size_t kRngOracleMaxNodes = 1000;

/// Exact relative neighborhood graph at weight alpha: (x, y) is kept unless
/// some z is strictly closer to both x and y than they are to each other.
/// Sorted edge list. O(n^3); n is capped at kRngOracleMaxNodes.
std::vector<UndirectedEdge> rng_oracle(const HybridDataset &data, double alpha);

/// |results[:k] intersect truth[:k]| / k. `results` may be shorter than k.
double recall_at_k(const std::vector<Neighbor> &results,
                   const std::vector<Neighbor> &truth, std::size_t k);

double qps(std::size_t queries, double seconds);

/// Entries not dominated by any other entry (O(n^2) scan).
std::vector<ParetoEntry> skyline_oracle(const std::vector<ParetoEntry> &entries);

/// Indices of pairs not reverse-dominated by any other pair (O(n^2) scan).
std::vector<std::size_t> inverse_skyline_oracle(const std::vector<DistPair> &pairs);

/// Fraction of nodes reachable from the seeds over edges active at `alpha`.
double reachable_fraction(const DegIndex &index, double alpha);

/// Beam search over a static graph for the ef nearest nodes to `point` at a
/// fixed weight. Sorted ascending.
std::vector<Neighbor> beam_candidates(const FixedGraph &graph,
                                      const HybridDataset &data,
                                      const HybridPoint &point, double alpha,
                                      std::size_t ef);

/// Strict RNG selection over candidates sorted by distance to the focal
/// point: c is dropped if an already kept s has dist(c, s) < dist(focal, c).
std::vector<NodeId> rng_select(const HybridDataset &data,
                               const std::vector<Neighbor> &sorted_candidates,
                               double alpha, std::size_t max_degree);

/// Flat incremental graph built at one fixed weight: beam-search candidate
/// acquisition plus strict RNG pruning on the scalar distance. Reverse edges
/// re-prune the target list on every insertion.
FixedGraph build_fusion_baseline(const HybridDataset &data, double alpha,
                                 std::size_t max_degree,
                                 std::size_t ef_construction);

// HGT1: "HGT1" | u32 query count | u32 k | per query k x u32 ids then
// k x f32 distances, little-endian.
void write_hgt(const std::string &path, const GroundTruth &gt);
GroundTruth read_hgt(const std::string &path);

} // namespace deg
