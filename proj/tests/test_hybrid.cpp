#include <gtest/gtest.h>

#include <random>

#include "deg/error.hpp"
#include "deg/hybrid.hpp"
#include "test_util.hpp"

using namespace deg;

namespace {

VectorSet rows(std::size_t dim, std::vector<float> v) {
  return VectorSet(dim, std::move(v));
}

} // namespace

TEST(Normalize, TwoPointDiameters) {
  auto data = normalize_dataset(rows(1, {0.0f, 4.0f}), rows(1, {1.0f, 3.0f}),
                                ExactDiameter{});
  EXPECT_DOUBLE_EQ(data.e_max(), 4.0);
  EXPECT_DOUBLE_EQ(data.s_max(), 2.0);
  EXPECT_EQ(data.norm_eps(), 0.0);
}

TEST(Normalize, IdenticalSVectorsRejected) {
  try {
    normalize_dataset(rows(2, {0, 0, 1, 1, 2, 0}), rows(1, {5, 5, 5}),
                      ExactDiameter{});
    FAIL() << "expected an error";
  } catch (const Error &e) {
    EXPECT_NE(std::string(e.what()).find("zero s-diameter"), std::string::npos);
  }
}

TEST(Normalize, IdenticalEVectorsRejected) {
  EXPECT_THROW(normalize_dataset(rows(1, {2, 2}), rows(1, {0, 1}),
                                 ExactDiameter{}),
               Error);
}

TEST(Normalize, ModalitySizeMismatch) {
  EXPECT_THROW(normalize_dataset(rows(1, {0, 1, 2}), rows(1, {0, 1}),
                                 ExactDiameter{}),
               Error);
}

TEST(Normalize, SampledNeverExceedsExactWithoutMargin) {
  std::mt19937_64 rng(3);
  auto e = test::random_vectors(100, 8, rng);
  auto s = test::random_vectors(100, 8, rng);
  auto exact = normalize_dataset(e, s, ExactDiameter{});
  auto sampled = normalize_dataset(e, s, SampledDiameter{5000, 0.0, 11});
  EXPECT_LE(sampled.e_max(), exact.e_max());
  EXPECT_LE(sampled.s_max(), exact.s_max());

  // Brute-force diameter oracle.
  double best = 0;
  for (std::size_t i = 0; i < 100; ++i)
    for (std::size_t j = i + 1; j < 100; ++j)
      best = std::max(best, test::ref_l2(e.row(i).data(), e.row(j).data(), 8));
  EXPECT_NEAR(exact.e_max(), best, 1e-12);
}

TEST(Normalize, ExactBoundHoldsForAllPairs) {
  auto data = test::random_dataset(60, 5, 3, 9);
  for (NodeId a = 0; a < 60; ++a)
    for (NodeId b = 0; b < 60; ++b) {
      auto p = dist_pair(data, a, b);
      EXPECT_LE(p.de, 1.0 + 1e-12);
      EXPECT_LE(p.ds, 1.0 + 1e-12);
    }
}

TEST(HybridDist, WeightCollapse) {
  auto data = test::random_dataset(30, 6, 2, 1);
  auto q = test::query_from_row(data, 3, 0.0, 1);
  q.e[0] += 0.25f;
  q.s[1] -= 0.5f;
  for (NodeId id : {0u, 7u, 29u}) {
    auto p = dist_pair(data, q.point(), id);
    q.alpha = 0.0;
    EXPECT_EQ(hybrid_dist(data, q, id), p.ds);
    q.alpha = 1.0;
    EXPECT_EQ(hybrid_dist(data, q, id), p.de);
  }
}

TEST(HybridDist, IdentityIsZero) {
  auto data = test::random_dataset(10, 4, 4, 2);
  for (double a : {0.0, 0.3, 1.0}) {
    auto q = test::query_from_row(data, 5, a, 1);
    EXPECT_EQ(hybrid_dist(data, q, 5), 0.0);
  }
  auto p = dist_pair(data, 4, 4);
  EXPECT_EQ(p.de, 0.0);
  EXPECT_EQ(p.ds, 0.0);
}

TEST(HybridDist, RecombinesDistPair) {
  auto data = test::random_dataset(50, 7, 3, 4);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<NodeId> pick(0, 49);
  std::uniform_real_distribution<double> ua(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    NodeId a = pick(rng), b = pick(rng);
    double alpha = ua(rng);
    auto q = test::query_from_row(data, a, alpha, 1);
    auto p = dist_pair(data, a, b);
    EXPECT_NEAR(p.at(alpha), hybrid_dist(data, q, b), 1e-12);
    EXPECT_NEAR(p.at(alpha), test::ref_dist(data, a, b, alpha), 1e-12);
  }
}

TEST(HybridDist, DeScaledByDiameter) {
  HybridDataset data(rows(1, {0, 2}), rows(1, {0, 1}), 4.0, 1.0);
  EXPECT_DOUBLE_EQ(dist_pair(data, 0, 1).de, 0.5);
}

TEST(ValidateQuery, Rejections) {
  auto data = test::random_dataset(5, 3, 2, 1);
  auto q = test::query_from_row(data, 0, 0.5, 1);
  EXPECT_NO_THROW(validate_query(data, q));
  auto bad = q;
  bad.alpha = 1.5;
  EXPECT_THROW(validate_query(data, bad), Error);
  bad = q;
  bad.k = 0;
  EXPECT_THROW(validate_query(data, bad), Error);
  bad = q;
  bad.k = 6;
  EXPECT_THROW(validate_query(data, bad), Error);
  bad = q;
  bad.e.push_back(0);
  EXPECT_THROW(validate_query(data, bad), Error);
}

TEST(VectorSet, RejectsRaggedData) {
  EXPECT_THROW(VectorSet(3, std::vector<float>(7)), Error);
  EXPECT_THROW(VectorSet(0, {}), Error);
}

TEST(Centroid, MeanOfRows) {
  auto data = normalize_dataset(rows(2, {0, 0, 2, 4}), rows(1, {1, 3}),
                                ExactDiameter{});
  auto c = compute_centroid(data);
  EXPECT_EQ(c.e, (std::vector<float>{1, 2}));
  EXPECT_EQ(c.s, (std::vector<float>{2}));
}
