#include "deg/pareto.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

#include "deg/error.hpp"

namespace deg {

std::size_t ParetoLayers::total() const {
  std::size_t n = 0;
  for (const auto &l : layers)
    n += l.size();
  return n;
}

std::vector<ParetoEntry> ParetoLayers::flatten() const {
  std::vector<ParetoEntry> out;
  out.reserve(total());
  for (const auto &l : layers)
    out.insert(out.end(), l.begin(), l.end());
  return out;
}

ParetoLayers find_pf(std::vector<ParetoEntry> candidates, std::size_t bound) {
  if (bound < 1)
    throw Error("candidate bound must be at least 1");

  std::sort(candidates.begin(), candidates.end(),
            [](const ParetoEntry &a, const ParetoEntry &b) {
              if (a.ds != b.ds)
                return a.ds < b.ds;
              if (a.de != b.de)
                return a.de < b.de;
              return a.node < b.node;
            });

  ParetoLayers out;
  std::size_t total = 0;
  std::vector<ParetoEntry> frontier, remain;
  while (!candidates.empty()) {
    frontier.clear();
    remain.clear();
    double prev_de = std::numeric_limits<double>::infinity();
    for (const auto &x : candidates) {
      // Exact duplicates of the last member do not dominate each other.
      bool duplicate = !frontier.empty() && x.de == frontier.back().de &&
                       x.ds == frontier.back().ds;
      if (x.de < prev_de || duplicate) {
        frontier.push_back(x);
        prev_de = x.de;
      } else {
        remain.push_back(x);
      }
    }
    if (total + frontier.size() < bound) {
      total += frontier.size();
      out.layers.push_back(frontier);
      candidates.swap(remain);
      continue;
    }
    if (out.layers.empty()) {
      // A lone oversized first layer would otherwise leave nothing to expand.
      frontier.resize(std::max<std::size_t>(1, bound - 1));
      out.layers.push_back(frontier);
    }
    break;
  }
  return out;
}

ParetoLayers gps(const DynamicGraph &graph, const HybridDataset &data,
                 const HybridPoint &focal, std::span<const NodeId> seeds,
                 std::size_t bound, GpsStats *stats) {
  if (bound < 1)
    throw Error("candidate bound must be at least 1");

  constexpr std::uint8_t kVisited = 1;
  constexpr std::uint8_t kExplored = 2;
  std::vector<std::uint8_t> marks(data.size(), 0);
  std::size_t evals = 0, expansions = 0, iterations = 0;

  std::vector<ParetoEntry> pool;
  for (NodeId v : seeds) {
    if (marks[v] & kVisited)
      continue;
    marks[v] |= kVisited;
    auto d = dist_pair(data, focal, v);
    ++evals;
    pool.push_back({v, d.de, d.ds});
  }
  ParetoLayers res = find_pf(std::move(pool), bound);

  std::vector<NodeId> fresh;
  while (res.total() < bound) {
    ++iterations;
    fresh.clear();
    for (const auto &layer : res.layers) {
      for (const auto &x : layer)
        if (!(marks[x.node] & kExplored))
          fresh.push_back(x.node);
      if (!fresh.empty())
        break;
    }
    if (fresh.empty())
      break;

    pool = res.flatten();
    for (NodeId u : fresh) {
      marks[u] |= kExplored;
      ++expansions;
      if (u >= graph.size())
        continue;
      for (const auto &edge : graph[u]) {
        NodeId v = edge.target;
        if (marks[v] & kVisited)
          continue;
        marks[v] |= kVisited;
        auto d = dist_pair(data, focal, v);
        ++evals;
        pool.push_back({v, d.de, d.ds});
      }
    }
    res = find_pf(std::move(pool), bound);
  }

  if (stats) {
    stats->distance_evals += evals;
    stats->expansions += expansions;
    stats->iterations += iterations;
  }
  return res;
}

} // namespace deg
