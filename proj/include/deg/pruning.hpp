#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "deg/graph.hpp"
#include "deg/hybrid.hpp"
#include "deg/interval_set.hpp"
#include "deg/pareto.hpp"

namespace deg {

/// Distances among the three corners of a triangle (x, y, z) where (x, y)
/// is the edge under test and z the potential pruner.
struct TrianglePair {
  DistPair xy;
  DistPair xz;
  DistPair yz;
};

/// Coefficients below this magnitude are treated as zero.
inline constexpr double kZeroCoefficient = 1e-12;

/// The alpha-set where alpha * other.de + (1 - alpha) * other.ds is strictly
/// below the same aggregate of `edge`, returned as a closed interval.
IntervalSet prune_range_one_sided(const DistPair &edge, const DistPair &other);

/// The alpha-set where (x, y) is the strict longest side of the triangle.
IntervalSet prune_range(const TrianglePair &t);

struct DrngStats {
  std::size_t distance_evals = 0;
  std::size_t rejected = 0;
  std::size_t back_pruned = 0;
};

inline constexpr std::size_t kUnboundedDegree =
    std::numeric_limits<std::size_t>::max();

/// Selects up to `max_degree` dynamic edges for the focal node from its
/// candidate layers (distances relative to the focal node). Candidates are
/// taken nearest layer first, in stored order; each one is pruned against
/// the already selected neighbors and kept iff its active range measures at
/// least `min_measure`. A second pass, in reverse selection order, prunes
/// every kept edge against the neighbors selected after it, so that for any
/// alpha no two active edges violate the relative neighborhood condition.
std::vector<DynamicEdge> drng_prune(const HybridDataset &data,
                                    const ParetoLayers &candidates,
                                    std::size_t max_degree, double min_measure,
                                    DrngStats *stats = nullptr);

} // namespace deg
