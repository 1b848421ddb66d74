#include "deg/search.hpp"

#include <algorithm>
#include <queue>
#include <utility>

#include "deg/error.hpp"

namespace deg {

namespace {

using Scored = std::pair<double, NodeId>;

/// `for_each_edge(u, alpha, visit)` calls visit(v) for every traversable
/// edge u -> v and returns how many edges it skipped.
template <typename ForEachEdge>
SearchResult beam_search(const HybridDataset &data, const HybridQuery &query,
                         const SearchParams &params,
                         const std::vector<NodeId> &entries,
                         ForEachEdge &&for_each_edge) {
  validate_query(data, query);
  if (params.ef_search < query.k)
    throw Error("ef_search must be at least k");

  const double alpha = query.alpha;
  const auto q = query.point();
  // Cheaper modality first; s-space on ties.
  const bool s_first = data.s_dim() <= data.e_dim();

  SearchResult out;
  SearchStats stats;
  std::vector<std::uint8_t> visited(data.size(), 0);
  std::priority_queue<Scored, std::vector<Scored>, std::greater<>> frontier;
  std::priority_queue<Scored> best;

  auto full_dist = [&](NodeId v) {
    ++stats.distance_evals_full;
    return dist_pair(data, q, v).at(alpha);
  };

  for (NodeId s : entries) {
    if (visited[s])
      continue;
    visited[s] = 1;
    double d = full_dist(s);
    frontier.emplace(d, s);
    best.emplace(d, s);
    if (best.size() > params.ef_search)
      best.pop();
  }

  auto consider = [&](NodeId v) {
    if (visited[v])
      return;
    visited[v] = 1;
    const bool full = best.size() >= params.ef_search;
    double d;
    if (params.early_stop && full) {
      const double bound = best.top().first;
      auto p = data.point(v);
      if (s_first) {
        double ds = euclidean(q.s, p.s) / data.s_max();
        if ((1.0 - alpha) * ds >= bound) {
          ++stats.distance_evals_partial;
          return;
        }
        d = DistPair{euclidean(q.e, p.e) / data.e_max(), ds}.at(alpha);
      } else {
        double de = euclidean(q.e, p.e) / data.e_max();
        if (alpha * de >= bound) {
          ++stats.distance_evals_partial;
          return;
        }
        d = DistPair{de, euclidean(q.s, p.s) / data.s_max()}.at(alpha);
      }
      ++stats.distance_evals_full;
    } else {
      d = full_dist(v);
    }
    if (!full || d < best.top().first) {
      frontier.emplace(d, v);
      best.emplace(d, v);
      if (best.size() > params.ef_search)
        best.pop();
    }
  };

  while (!frontier.empty()) {
    auto [d, u] = frontier.top();
    if (d > best.top().first)
      break;
    frontier.pop();
    ++stats.nodes_popped;
    stats.edges_skipped_by_range += for_each_edge(u, alpha, consider);
  }

  out.neighbors.reserve(best.size());
  while (!best.empty()) {
    out.neighbors.push_back({best.top().second, best.top().first});
    best.pop();
  }
  std::sort(out.neighbors.begin(), out.neighbors.end(),
            [](const Neighbor &a, const Neighbor &b) {
              return a.dist < b.dist || (a.dist == b.dist && a.id < b.id);
            });
  if (out.neighbors.size() > query.k)
    out.neighbors.resize(query.k);
  out.underfilled = out.neighbors.size() < query.k;
  if (params.collect_stats)
    out.stats = stats;
  return out;
}

} // namespace

SearchResult search(const DegIndex &index, const HybridDataset &data,
                    const HybridQuery &query, const SearchParams &params) {
  if (index.size() != data.size())
    throw Error("dataset size does not match index");
  return beam_search(data, query, params, index.seeds(),
                     [&](NodeId u, double alpha, auto &visit) {
                       auto [covering, partial] = index.binned_edges(u, alpha);
                       std::size_t active = covering.size();
                       for (std::uint32_t i : covering)
                         visit(index.packed_edge(i).target);
                       for (std::uint32_t i : partial) {
                         const auto &e = index.packed_edge(i);
                         if (index.packed_contains(e, alpha)) {
                           ++active;
                           visit(e.target);
                         }
                       }
                       return index.packed_edges(u).size() - active;
                     });
}

SearchResult search_fixed_graph(const FixedGraph &graph,
                                const HybridDataset &data,
                                const HybridQuery &query,
                                const SearchParams &params) {
  if (graph.size() != data.size())
    throw Error("dataset size does not match graph");
  if (graph.entry_points.empty())
    throw Error("graph has no entry points");
  return beam_search(data, query, params, graph.entry_points,
                     [&](NodeId u, double, auto &visit) {
                       for (NodeId v : graph.adjacency[u])
                         visit(v);
                       return std::size_t{0};
                     });
}

FixedGraph to_fixed_graph(const DegIndex &index) {
  FixedGraph out;
  out.adjacency.resize(index.size());
  for (std::size_t u = 0; u < index.size(); ++u)
    for (const auto &e : index.edges(static_cast<NodeId>(u)))
      out.adjacency[u].push_back(e.target);
  out.entry_points = index.seeds();
  return out;
}

} // namespace deg
