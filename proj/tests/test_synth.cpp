#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "deg/error.hpp"
#include "deg/synth.hpp"
#include "deg/vector_io.hpp"

using namespace deg;

namespace {

std::string temp_path(const std::string &name) {
  return (std::filesystem::temp_directory_path() / ("deg_test_" + name)).string();
}

std::vector<char> read_bytes(const std::string &path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

SynthSpec small_spec() {
  SynthSpec s;
  s.n = 2000;
  s.e_dim = 8;
  s.s_dim = 2;
  s.query_count = 20;
  return s;
}

double agreement(const SynthData &d) {
  std::size_t same = 0;
  for (std::size_t i = 0; i < d.e_cluster.size(); ++i)
    same += d.e_cluster[i] == d.s_cluster[i];
  return static_cast<double>(same) / static_cast<double>(d.e_cluster.size());
}

} // namespace

TEST(Synth, SameSeedSameBytes) {
  auto a = generate(small_spec()), b = generate(small_spec());
  auto p1 = temp_path("a.hvec"), p2 = temp_path("b.hvec");
  write_hvec(p1, a.base_e);
  write_hvec(p2, b.base_e);
  EXPECT_EQ(read_bytes(p1), read_bytes(p2));
  auto spec = small_spec();
  spec.seed = 43;
  write_hvec(p2, generate(spec).base_e);
  EXPECT_NE(read_bytes(p1), read_bytes(p2));
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST(Synth, Shapes) {
  auto d = generate(small_spec());
  EXPECT_EQ(d.base_e.size(), 2000u);
  EXPECT_EQ(d.base_e.dim(), 8u);
  EXPECT_EQ(d.base_s.dim(), 2u);
  EXPECT_EQ(d.query_e.size(), 20u);
  EXPECT_EQ(d.query_s.size(), 20u);
  for (float x : d.base_e.data())
    EXPECT_TRUE(std::isfinite(x));
}

TEST(Synth, FullCorrelationAlignsClusters) {
  auto spec = small_spec();
  spec.rho = 1.0;
  auto d = generate(spec);
  EXPECT_EQ(d.e_cluster, d.s_cluster);
}

TEST(Synth, NoCorrelationMatchesBinomial) {
  auto spec = small_spec();
  spec.rho = 0.0;
  spec.n = 20000;
  auto d = generate(spec);
  const double p = 1.0 / 20.0;
  const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(spec.n));
  EXPECT_NEAR(agreement(d), p, 3 * sigma);
}

TEST(Synth, PartialCorrelationMatchesBinomial) {
  auto spec = small_spec();
  spec.rho = 0.5;
  spec.n = 20000;
  auto d = generate(spec);
  const double p = 0.5 + 0.5 / 20.0;
  const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(spec.n));
  EXPECT_NEAR(agreement(d), p, 3 * sigma);
}

TEST(Synth, UniformCubeInRange) {
  auto spec = small_spec();
  spec.distribution = UniformCube{};
  auto d = generate(spec);
  for (float x : d.base_s.data()) {
    EXPECT_GE(x, 0.0f);
    EXPECT_LE(x, 1.0f);
  }
  EXPECT_TRUE(d.e_cluster.empty());
}

TEST(Synth, RejectsBadSpec) {
  auto spec = small_spec();
  spec.rho = 1.5;
  EXPECT_THROW(generate(spec), Error);
  spec = small_spec();
  spec.n = 0;
  EXPECT_THROW(generate(spec), Error);
}

TEST(QuerySet, FixedAlpha) {
  auto d = generate(small_spec());
  auto qs = make_query_set(d.query_e, d.query_s, FixedAlpha{0.5}, 10);
  ASSERT_EQ(qs.size(), 20u);
  for (const auto &q : qs) {
    EXPECT_EQ(q.alpha, 0.5);
    EXPECT_EQ(q.k, 10u);
  }
}

TEST(QuerySet, IntervalBounds) {
  auto d = generate(small_spec());
  auto qs = make_query_set(d.query_e, d.query_s, AlphaInterval{0.0, 0.2, 3}, 10);
  for (const auto &q : qs) {
    EXPECT_GE(q.alpha, 0.0);
    EXPECT_LE(q.alpha, 0.2);
    EXPECT_EQ(static_cast<double>(static_cast<float>(q.alpha)), q.alpha);
  }
  auto again = make_query_set(d.query_e, d.query_s, AlphaInterval{0.0, 0.2, 3}, 10);
  for (std::size_t i = 0; i < qs.size(); ++i)
    EXPECT_EQ(qs[i].alpha, again[i].alpha);
}

TEST(QuerySet, GridCardinality) {
  auto d = generate(small_spec());
  auto qs = make_query_set(d.query_e, d.query_s, AlphaGrid{21}, 10);
  EXPECT_EQ(qs.size(), 21u * 20u);
  EXPECT_EQ(qs.front().alpha, 0.0);
  EXPECT_EQ(qs.back().alpha, 1.0);
}

TEST(QuerySet, ParseSchemes) {
  EXPECT_EQ(std::get<FixedAlpha>(parse_alpha_scheme("fixed:0.25")).alpha, 0.25);
  auto iv = std::get<AlphaInterval>(parse_alpha_scheme("interval:0.2:0.4:9"));
  EXPECT_EQ(iv.lo, 0.2);
  EXPECT_EQ(iv.hi, 0.4);
  EXPECT_EQ(iv.seed, 9u);
  EXPECT_EQ(std::get<AlphaGrid>(parse_alpha_scheme("grid:11")).points, 11u);
  EXPECT_EQ(std::get<AlphaGrid>(parse_alpha_scheme("grid")).points, 21u);
  for (const char *bad : {"", "fixed", "fixed:2", "interval:0.5:0.1", "grid:x",
                          "bogus:1"})
    EXPECT_THROW(parse_alpha_scheme(bad), Error) << bad;
}

TEST(QuerySet, Bands) {
  EXPECT_EQ(alpha_band(0.0), 0u);
  EXPECT_EQ(alpha_band(0.2), 0u);
  EXPECT_EQ(alpha_band(0.21), 1u);
  EXPECT_EQ(alpha_band(1.0), 4u);
}

TEST(Files, HvecAndHqryRoundTrip) {
  auto d = generate(small_spec());
  auto pv = temp_path("rt.hvec"), pq = temp_path("rt.hqry");
  write_hvec(pv, d.base_s);
  EXPECT_EQ(read_hvec(pv), d.base_s);
  auto qs = make_query_set(d.query_e, d.query_s, AlphaInterval{}, 7);
  write_hqry(pq, qs);
  auto back = read_hqry(pq);
  ASSERT_EQ(back.size(), qs.size());
  for (std::size_t i = 0; i < qs.size(); ++i) {
    EXPECT_EQ(back[i].e, qs[i].e);
    EXPECT_EQ(back[i].s, qs[i].s);
    EXPECT_EQ(back[i].alpha, qs[i].alpha);
    EXPECT_EQ(back[i].k, 7u);
  }
  EXPECT_THROW(read_hqry(pv), Error);
  EXPECT_THROW(read_hvec(pq), Error);

  auto bytes = read_bytes(pv);
  bytes.resize(bytes.size() - 3);
  {
    std::ofstream f(pv, std::ios::binary | std::ios::trunc);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }
  EXPECT_THROW(read_hvec(pv), Error);
  std::remove(pv.c_str());
  std::remove(pq.c_str());
}
