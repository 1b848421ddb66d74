#include <gtest/gtest.h>

#include <random>

#include "deg/error.hpp"
#include "deg/eval.hpp"
#include "deg/index.hpp"
#include "deg/search.hpp"
#include "test_util.hpp"

using namespace deg;

namespace {

struct Fixture {
  HybridDataset data;
  DegIndex index;
};

const Fixture &small_index() {
  static const Fixture f = [] {
    auto data = test::random_dataset(600, 8, 3, 31);
    BuildParams p;
    p.max_degree = 12;
    p.ef_construction = 48;
    auto idx = build(data, p);
    return Fixture{std::move(data), std::move(idx)};
  }();
  return f;
}

std::vector<HybridQuery> random_queries(const HybridDataset &data,
                                        std::size_t count, std::size_t k,
                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  std::uniform_real_distribution<double> ua(0.0, 1.0);
  std::vector<HybridQuery> out;
  for (std::size_t i = 0; i < count; ++i) {
    HybridQuery q;
    q.e.resize(data.e_dim());
    q.s.resize(data.s_dim());
    for (auto &x : q.e)
      x = u(rng);
    for (auto &x : q.s)
      x = u(rng);
    q.alpha = ua(rng);
    q.k = k;
    out.push_back(std::move(q));
  }
  return out;
}

void expect_sorted(const std::vector<Neighbor> &r) {
  for (std::size_t i = 1; i < r.size(); ++i)
    EXPECT_TRUE(r[i - 1].dist < r[i].dist ||
                (r[i - 1].dist == r[i].dist && r[i - 1].id < r[i].id));
}

} // namespace

TEST(Search, TwoNodeIndexReturnsBoth) {
  auto data = normalize_dataset(VectorSet(1, {0.0f, 1.0f}),
                                VectorSet(1, {0.0f, 1.0f}), ExactDiameter{});
  auto idx = build(data, BuildParams{});
  HybridQuery q{{0.2f}, {0.2f}, 0.5, 2};
  SearchParams sp;
  sp.ef_search = 2;
  auto r = search(idx, data, q, sp);
  ASSERT_EQ(r.neighbors.size(), 2u);
  EXPECT_EQ(r.neighbors[0].id, 0u);
  EXPECT_EQ(r.neighbors[1].id, 1u);
  EXPECT_NEAR(r.neighbors[0].dist, 0.2, 1e-6);
  EXPECT_FALSE(r.underfilled);

  auto fixed = to_fixed_graph(idx);
  auto rf = search_fixed_graph(fixed, data, q, sp);
  EXPECT_EQ(rf.neighbors.size(), 2u);
  EXPECT_EQ(rf.neighbors[0].id, 0u);
}

TEST(Search, FullCandidateIndexFindsStoredObject) {
  auto data = test::random_dataset(60, 6, 3, 2);
  BuildParams p;
  p.max_degree = 59;
  p.ef_construction = 59;
  p.min_active = 0.0;
  auto idx = build(data, p);
  SearchParams sp;
  sp.ef_search = 1;
  for (NodeId id = 0; id < 60; ++id)
    for (double a : {0.0, 0.5, 1.0}) {
      sp.ef_search = 10;
      auto r = search(idx, data, test::query_from_row(data, id, a, 1), sp);
      ASSERT_EQ(r.neighbors.size(), 1u);
      EXPECT_EQ(r.neighbors[0].id, id);
      EXPECT_EQ(r.neighbors[0].dist, 0.0);
    }
}

TEST(Search, ResultsSortedAndExactDistances) {
  const auto &f = small_index();
  SearchParams sp;
  sp.ef_search = 40;
  for (const auto &q : random_queries(f.data, 50, 10, 3)) {
    auto r = search(f.index, f.data, q, sp);
    ASSERT_EQ(r.neighbors.size(), 10u);
    expect_sorted(r.neighbors);
    for (const auto &nb : r.neighbors)
      EXPECT_NEAR(nb.dist, hybrid_dist(f.data, q, nb.id), 1e-15);
  }
}

TEST(Search, EarlyStopNeverChangesResults) {
  const auto &f = small_index();
  SearchParams on, off;
  on.ef_search = off.ef_search = 20;
  off.early_stop = false;
  std::size_t partial = 0;
  for (auto q : random_queries(f.data, 200, 10, 4)) {
    for (int g = 0; g <= 10; ++g) {
      q.alpha = g / 10.0;
      auto a = search(f.index, f.data, q, on);
      auto b = search(f.index, f.data, q, off);
      ASSERT_EQ(a.neighbors.size(), b.neighbors.size());
      for (std::size_t i = 0; i < a.neighbors.size(); ++i) {
        EXPECT_EQ(a.neighbors[i].id, b.neighbors[i].id);
        EXPECT_EQ(a.neighbors[i].dist, b.neighbors[i].dist);
      }
      EXPECT_EQ(b.stats.distance_evals_partial, 0u);
      partial += a.stats.distance_evals_partial;
    }
  }
  EXPECT_GT(partial, 0u);
}

TEST(Search, EarlyStopIsALowerBound) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    DistPair p{u(rng), u(rng)};
    double a = u(rng);
    EXPECT_LE((1 - a) * p.ds, p.at(a));
    EXPECT_LE(a * p.de, p.at(a));
  }
}

TEST(Search, WorkGrowsWithEfOnAverage) {
  const auto &f = small_index();
  auto queries = random_queries(f.data, 100, 10, 5);
  double prev_pops = 0, prev_evals = 0;
  for (std::size_t ef = 10; ef <= 100; ef += 10) {
    SearchParams sp;
    sp.ef_search = ef;
    SearchStats total;
    for (const auto &q : queries)
      total += search(f.index, f.data, q, sp).stats;
    double pops = static_cast<double>(total.nodes_popped);
    double evals = static_cast<double>(total.distance_evals_full +
                                       total.distance_evals_partial);
    EXPECT_GE(pops, prev_pops) << ef;
    EXPECT_GE(evals, prev_evals) << ef;
    prev_pops = pops;
    prev_evals = evals;
  }
}

TEST(Search, ForcedFullRangesEqualFixedGraph) {
  const auto &f = small_index();
  auto full = f.index.with_full_ranges();
  auto fixed = to_fixed_graph(f.index);
  SearchParams sp;
  sp.ef_search = 30;
  for (const auto &q : random_queries(f.data, 100, 10, 6)) {
    auto a = search(full, f.data, q, sp);
    auto b = search_fixed_graph(fixed, f.data, q, sp);
    ASSERT_EQ(a.neighbors.size(), b.neighbors.size());
    for (std::size_t i = 0; i < a.neighbors.size(); ++i) {
      EXPECT_EQ(a.neighbors[i].id, b.neighbors[i].id);
      EXPECT_EQ(a.neighbors[i].dist, b.neighbors[i].dist);
    }
    EXPECT_EQ(a.stats.distance_evals_full, b.stats.distance_evals_full);
    EXPECT_EQ(a.stats.nodes_popped, b.stats.nodes_popped);
    EXPECT_EQ(a.stats.edges_skipped_by_range, 0u);
  }
}

TEST(Search, RangesSkipEdges) {
  const auto &f = small_index();
  SearchParams sp;
  sp.ef_search = 30;
  std::size_t skipped = 0;
  for (const auto &q : random_queries(f.data, 50, 10, 7))
    skipped += search(f.index, f.data, q, sp).stats.edges_skipped_by_range;
  EXPECT_GT(skipped, 0u);
}

TEST(Search, UnreachableNodesUnderfill) {
  auto data = test::random_dataset(5, 3, 2, 1);
  FixedGraph g;
  g.adjacency.resize(5);
  g.adjacency[0] = {1};
  g.entry_points = {0};
  HybridQuery q = test::query_from_row(data, 4, 0.5, 3);
  SearchParams sp;
  sp.ef_search = 3;
  auto r = search_fixed_graph(g, data, q, sp);
  EXPECT_EQ(r.neighbors.size(), 2u);
  EXPECT_TRUE(r.underfilled);
}

TEST(Search, RejectsBadInput) {
  const auto &f = small_index();
  auto q = random_queries(f.data, 1, 10, 9)[0];
  SearchParams sp;
  sp.ef_search = 5;
  EXPECT_THROW(search(f.index, f.data, q, sp), Error);
  sp.ef_search = 10;
  q.alpha = -0.1;
  EXPECT_THROW(search(f.index, f.data, q, sp), Error);
  auto other = test::random_dataset(10, 8, 3, 1);
  q.alpha = 0.5;
  EXPECT_THROW(search(f.index, other, q, sp), Error);
}
