#include "deg/eval.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>

#include "binary_io.hpp"
#include "deg/error.hpp"

namespace deg {

namespace {

bool by_dist_then_id(const Neighbor &a, const Neighbor &b) {
  return a.dist < b.dist || (a.dist == b.dist && a.id < b.id);
}

} // namespace

std::vector<Neighbor> brute_force_topk(const HybridDataset &data,
                                       const HybridQuery &query,
                                       std::size_t k) {
  if (k < 1 || k > data.size())
    throw Error("k must lie in [1, n]");
  std::vector<Neighbor> all(data.size());
  for (NodeId i = 0; i < data.size(); ++i)
    all[i] = {i, hybrid_dist(data, query, i)};
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k),
                    all.end(), by_dist_then_id);
  all.resize(k);
  return all;
}

GroundTruth brute_force_ground_truth(const HybridDataset &data,
                                     const std::vector<HybridQuery> &queries,
                                     std::size_t k) {
  GroundTruth gt;
  gt.k = k;
  gt.rows.reserve(queries.size());
  for (const auto &q : queries)
    gt.rows.push_back(brute_force_topk(data, q, k));
  return gt;
}

std::vector<UndirectedEdge> rng_oracle(const HybridDataset &data,
                                       double alpha) {
  const std::size_t n = data.size();
  if (n > kRngOracleMaxNodes)
    throw Error("rng oracle is limited to " +
                std::to_string(kRngOracleMaxNodes) + " nodes");
  std::vector<double> dist(n * n, 0.0);
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j)
      dist[i * n + j] = dist[j * n + i] = dist_pair(data, i, j).at(alpha);

  std::vector<UndirectedEdge> edges;
  for (NodeId x = 0; x < n; ++x) {
    for (NodeId y = x + 1; y < n; ++y) {
      const double dxy = dist[x * n + y];
      bool pruned = false;
      for (NodeId z = 0; z < n && !pruned; ++z) {
        if (z == x || z == y)
          continue;
        pruned = dist[x * n + z] < dxy && dist[y * n + z] < dxy;
      }
      if (!pruned)
        edges.emplace_back(x, y);
    }
  }
  return edges;
}

double recall_at_k(const std::vector<Neighbor> &results,
                   const std::vector<Neighbor> &truth, std::size_t k) {
  if (k == 0 || truth.size() < k)
    throw Error("ground truth shorter than k");
  std::vector<NodeId> expected;
  for (std::size_t i = 0; i < k; ++i)
    expected.push_back(truth[i].id);
  std::sort(expected.begin(), expected.end());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < std::min(k, results.size()); ++i)
    hits += std::binary_search(expected.begin(), expected.end(), results[i].id);
  return static_cast<double>(hits) / static_cast<double>(k);
}

double qps(std::size_t queries, double seconds) {
  if (!(seconds > 0.0))
    throw Error("elapsed time must be positive");
  return static_cast<double>(queries) / seconds;
}

std::vector<ParetoEntry>
skyline_oracle(const std::vector<ParetoEntry> &entries) {
  std::vector<ParetoEntry> out;
  for (const auto &a : entries) {
    bool dominated = std::any_of(entries.begin(), entries.end(),
                                 [&](const ParetoEntry &b) { return dominates(b, a); });
    if (!dominated)
      out.push_back(a);
  }
  return out;
}

std::vector<std::size_t>
inverse_skyline_oracle(const std::vector<DistPair> &pairs) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < pairs.size() && !dominated; ++j) {
      const auto &a = pairs[j];
      const auto &b = pairs[i];
      dominated = a.de >= b.de && a.ds >= b.ds && (a.de > b.de || a.ds > b.ds);
    }
    if (!dominated)
      out.push_back(i);
  }
  return out;
}

std::vector<Neighbor> beam_candidates(const FixedGraph &graph,
                                      const HybridDataset &data,
                                      const HybridPoint &point, double alpha,
                                      std::size_t ef) {
  HybridQuery q;
  q.e.assign(point.e.begin(), point.e.end());
  q.s.assign(point.s.begin(), point.s.end());
  q.alpha = alpha;
  q.k = std::min(ef, data.size());
  SearchParams params;
  params.ef_search = q.k;
  params.collect_stats = false;
  return search_fixed_graph(graph, data, q, params).neighbors;
}

std::vector<NodeId> rng_select(const HybridDataset &data,
                               const std::vector<Neighbor> &sorted_candidates,
                               double alpha, std::size_t max_degree) {
  std::vector<NodeId> kept;
  for (const auto &c : sorted_candidates) {
    if (kept.size() >= max_degree)
      break;
    bool pruned = false;
    for (NodeId s : kept) {
      if (dist_pair(data, c.id, s).at(alpha) < c.dist) {
        pruned = true;
        break;
      }
    }
    if (!pruned)
      kept.push_back(c.id);
  }
  return kept;
}

FixedGraph build_fusion_baseline(const HybridDataset &data, double alpha,
                                 std::size_t max_degree,
                                 std::size_t ef_construction) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw Error("baseline alpha must lie in [0, 1]");
  if (max_degree < 1 || ef_construction < max_degree)
    throw Error("baseline needs M >= 1 and ef_construction >= M");

  FixedGraph g;
  g.build_alpha = alpha;
  g.adjacency.resize(data.size());
  g.entry_points = {0};

  for (NodeId x = 1; x < data.size(); ++x) {
    auto cands = beam_candidates(g, data, data.point(x), alpha, ef_construction);
    std::erase_if(cands, [&](const Neighbor &c) { return c.id == x; });
    auto selected = rng_select(data, cands, alpha, max_degree);
    g.adjacency[x] = selected;
    for (NodeId y : selected) {
      auto &adj = g.adjacency[y];
      adj.push_back(x);
      std::vector<Neighbor> pool;
      pool.reserve(adj.size());
      for (NodeId v : adj)
        pool.push_back({v, dist_pair(data, y, v).at(alpha)});
      std::sort(pool.begin(), pool.end(), by_dist_then_id);
      adj = rng_select(data, pool, alpha, max_degree);
    }
  }

  // Search starts from the node nearest the centroid at the build weight.
  auto centroid = compute_centroid(data);
  NodeId entry = 0;
  double best = dist_pair(data, centroid.point(), 0).at(alpha);
  for (NodeId i = 1; i < data.size(); ++i) {
    double d = dist_pair(data, centroid.point(), i).at(alpha);
    if (d < best) {
      best = d;
      entry = i;
    }
  }
  g.entry_points = {entry};
  return g;
}

void write_hgt(const std::string &path, const GroundTruth &gt) {
  io::Writer w;
  w.magic("HGT1");
  w.u32(static_cast<std::uint32_t>(gt.rows.size()));
  w.u32(static_cast<std::uint32_t>(gt.k));
  for (const auto &row : gt.rows) {
    if (row.size() != gt.k)
      throw Error("ground-truth row length differs from k");
    for (const auto &nb : row)
      w.u32(nb.id);
    for (const auto &nb : row)
      w.f32(static_cast<float>(nb.dist));
  }
  w.save(path);
}

GroundTruth read_hgt(const std::string &path) {
  auto r = io::Reader::open(path);
  r.expect_magic("HGT1");
  GroundTruth gt;
  std::uint32_t count = r.u32();
  gt.k = r.u32();
  r.need(static_cast<std::size_t>(count) * gt.k * 8);
  gt.rows.resize(count);
  for (auto &row : gt.rows) {
    row.resize(gt.k);
    for (auto &nb : row)
      nb.id = r.u32();
    for (auto &nb : row)
      nb.dist = r.f32();
  }
  r.expect_end();
  return gt;
}

double reachable_fraction(const DegIndex &index, double alpha) {
  if (index.size() == 0)
    return 0.0;
  std::vector<std::uint8_t> seen(index.size(), 0);
  std::vector<NodeId> stack;
  for (NodeId s : index.seeds())
    if (!seen[s]) {
      seen[s] = 1;
      stack.push_back(s);
    }
  std::size_t count = stack.size();
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (const auto &e : index.edges(u))
      if (!seen[e.target] && e.range.contains(alpha)) {
        seen[e.target] = 1;
        ++count;
        stack.push_back(e.target);
      }
  }
  return static_cast<double>(count) / static_cast<double>(index.size());
}

} // namespace deg
