#include "deg/index.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>

#include "binary_io.hpp"
#include "deg/error.hpp"

namespace deg {

void BuildParams::validate() const {
  if (max_degree < 1)
    throw Error("M must be at least 1");
  if (ef_construction < max_degree)
    throw Error("ef_construction must be at least M");
  if (!(min_active >= 0.0 && min_active <= 1.0))
    throw Error("th must lie in [0, 1]");
}

bool SeedFrontier::insert(NodeId id, DistPair to_centroid) {
  for (const auto &m : members_)
    if (reverse_dominates(m.d, to_centroid))
      return false;
  std::erase_if(members_, [&](const Member &m) {
    return reverse_dominates(to_centroid, m.d);
  });
  auto pos = std::lower_bound(members_.begin(), members_.end(), to_centroid.ds,
                              [](const Member &m, double ds) { return m.d.ds < ds; });
  members_.insert(pos, {id, to_centroid});
  return true;
}

std::vector<NodeId> SeedFrontier::ids() const {
  std::vector<NodeId> out;
  out.reserve(members_.size());
  for (const auto &m : members_)
    out.push_back(m.id);
  std::sort(out.begin(), out.end());
  return out;
}

DegIndex::DegIndex(IndexMeta meta, Centroid centroid, std::vector<NodeId> seeds,
                   DynamicGraph graph)
    : meta_(meta), centroid_(std::move(centroid)), seeds_(std::move(seeds)),
      graph_(std::move(graph)) {
  if (graph_.size() != meta_.n)
    throw Error("index adjacency size does not match n");
  for (NodeId s : seeds_)
    if (s >= meta_.n)
      throw Error("seed id out of range");
  pack();
}

void DegIndex::pack() {
  offsets_.assign(1, 0);
  packed_.clear();
  ranges_.clear();
  for (const auto &adj : graph_) {
    for (const auto &e : adj) {
      const auto begin = static_cast<std::uint32_t>(ranges_.size());
      for (const auto &iv : e.range.intervals())
        ranges_.push_back(iv);
      packed_.push_back(
          {e.target, begin, static_cast<std::uint32_t>(ranges_.size())});
    }
    offsets_.push_back(static_cast<std::uint32_t>(packed_.size()));
  }

  bin_offsets_.assign(1, 0);
  bin_split_.clear();
  bin_edges_.clear();
  std::vector<std::uint32_t> partial;
  for (NodeId u = 0; u < graph_.size(); ++u)
    for (std::size_t b = 0; b < kAlphaBins; ++b) {
      const Interval bin{static_cast<double>(b) / kAlphaBins,
                         static_cast<double>(b + 1) / kAlphaBins};
      partial.clear();
      for (std::uint32_t i = offsets_[u]; i < offsets_[u + 1]; ++i) {
        const auto &e = packed_[i];
        bool covers = false, meets = false;
        for (std::uint32_t r = e.range_begin; r < e.range_end; ++r) {
          covers |= ranges_[r].lo <= bin.lo && bin.hi <= ranges_[r].hi;
          meets |= ranges_[r].lo <= bin.hi && bin.lo <= ranges_[r].hi;
        }
        if (covers)
          bin_edges_.push_back(i);
        else if (meets)
          partial.push_back(i);
      }
      bin_split_.push_back(static_cast<std::uint32_t>(bin_edges_.size()));
      bin_edges_.insert(bin_edges_.end(), partial.begin(), partial.end());
      bin_offsets_.push_back(static_cast<std::uint32_t>(bin_edges_.size()));
    }
}

std::size_t DegIndex::edge_count() const {
  std::size_t n = 0;
  for (const auto &adj : graph_)
    n += adj.size();
  return n;
}

DegIndex DegIndex::with_full_ranges() const {
  DegIndex out = *this;
  for (auto &adj : out.graph_)
    for (auto &e : adj)
      e.range = IntervalSet::full();
  out.pack();
  return out;
}

void DegIndex::check_compatible(const HybridDataset &data) const {
  if (data.size() != meta_.n || data.e_dim() != meta_.e_dim ||
      data.s_dim() != meta_.s_dim)
    throw Error("dataset shape does not match index");
  if (data.e_max() != meta_.e_max || data.s_max() != meta_.s_max)
    throw Error("dataset normalization does not match index");
}

DegBuilder::DegBuilder(const HybridDataset &data, BuildParams params)
    : data_(data), params_(std::move(params)), centroid_(compute_centroid(data)),
      graph_(data.size()) {
  params_.validate();
}

void DegBuilder::insert(NodeId x) {
  if (inserted_ > 0) {
    auto seeds = seeds_.ids();
    auto candidates = gps(graph_, data_, data_.point(x), seeds,
                          params_.ef_construction, &stats_.gps);
    graph_[x] = drng_prune(data_, candidates, params_.max_degree,
                           params_.min_active, &stats_.drng);
    std::vector<NodeId> targets;
    for (const auto &e : graph_[x])
      targets.push_back(e.target);
    for (NodeId y : targets)
      reverse_update(y, x);
  }
  update_seeds(x);
  ++inserted_;
}

void DegBuilder::reverse_update(NodeId y, NodeId x) {
  if (x == y)
    throw Error("reverse update onto itself");
  std::vector<ParetoEntry> pool;
  pool.reserve(graph_[y].size() + 1);
  for (const auto &e : graph_[y]) {
    auto d = dist_pair(data_, y, e.target);
    pool.push_back({e.target, d.de, d.ds});
  }
  auto d = dist_pair(data_, y, x);
  pool.push_back({x, d.de, d.ds});
  stats_.drng.distance_evals += pool.size();

  std::size_t bound = pool.size() + 1;
  graph_[y] = drng_prune(data_, find_pf(std::move(pool), bound),
                         params_.max_degree, params_.min_active, &stats_.drng);
  ++stats_.reverse_updates;
}

void DegBuilder::update_seeds(NodeId x) {
  seeds_.insert(x, dist_pair(data_, centroid_.point(), x));
}

DegIndex DegBuilder::finish() && {
  IndexMeta meta;
  meta.max_degree = static_cast<std::uint32_t>(params_.max_degree);
  meta.ef_construction = static_cast<std::uint32_t>(params_.ef_construction);
  meta.min_active = params_.min_active;
  meta.e_max = data_.e_max();
  meta.s_max = data_.s_max();
  meta.norm_eps = data_.norm_eps();
  meta.e_dim = static_cast<std::uint32_t>(data_.e_dim());
  meta.s_dim = static_cast<std::uint32_t>(data_.s_dim());
  meta.n = static_cast<std::uint32_t>(data_.size());
  return DegIndex(meta, std::move(centroid_), seeds_.ids(), std::move(graph_));
}

std::vector<NodeId> insertion_order(std::size_t n, const BuildParams &params) {
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  if (params.shuffle_seed) {
    std::mt19937_64 rng(*params.shuffle_seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  return order;
}

DegIndex build(const HybridDataset &data, const BuildParams &params,
               BuildStats *stats) {
  params.validate();
  if (data.size() > std::numeric_limits<NodeId>::max())
    throw Error("dataset too large for 32-bit node ids");
  DegBuilder builder(data, params);
  for (NodeId x : insertion_order(data.size(), params))
    builder.insert(x);
  if (stats)
    *stats = builder.stats();
  return std::move(builder).finish();
}

namespace {

double dequantize(std::uint16_t q) {
  return static_cast<double>(q) / static_cast<double>(kRangeGrid);
}

std::uint16_t quantize_down(double x) {
  auto q = static_cast<long>(std::floor(x * kRangeGrid));
  q = std::clamp<long>(q, 0, kRangeGrid);
  while (q < static_cast<long>(kRangeGrid) &&
         dequantize(static_cast<std::uint16_t>(q + 1)) <= x)
    ++q;
  while (q > 0 && dequantize(static_cast<std::uint16_t>(q)) > x)
    --q;
  return static_cast<std::uint16_t>(q);
}

std::uint16_t quantize_up(double x) {
  auto q = static_cast<long>(std::ceil(x * kRangeGrid));
  q = std::clamp<long>(q, 0, kRangeGrid);
  while (q > 0 && dequantize(static_cast<std::uint16_t>(q - 1)) >= x)
    --q;
  while (q < static_cast<long>(kRangeGrid) &&
         dequantize(static_cast<std::uint16_t>(q)) < x)
    ++q;
  return static_cast<std::uint16_t>(q);
}

} // namespace

std::vector<std::pair<std::uint16_t, std::uint16_t>>
quantize_range(const IntervalSet &range) {
  std::vector<std::pair<std::uint16_t, std::uint16_t>> out;
  for (const auto &iv : range.intervals()) {
    std::uint16_t lo = quantize_down(iv.lo);
    std::uint16_t hi = quantize_up(iv.hi);
    if (!out.empty() && out.back().second >= lo)
      out.back().second = std::max(out.back().second, hi);
    else
      out.emplace_back(lo, hi);
  }
  return out;
}

std::vector<char> serialize(const DegIndex &index) {
  const auto &meta = index.meta();
  io::Writer w;
  w.magic("DEG1");
  w.u32(kIndexVersion);
  w.u32(meta.max_degree);
  w.u32(meta.ef_construction);
  w.f64(meta.min_active);
  w.f64(meta.e_max);
  w.f64(meta.s_max);
  w.f64(meta.norm_eps);
  w.u32(meta.e_dim);
  w.u32(meta.s_dim);
  w.u32(meta.n);
  for (float x : index.centroid().e)
    w.f32(x);
  for (float x : index.centroid().s)
    w.f32(x);

  w.u32(static_cast<std::uint32_t>(index.seeds().size()));
  for (NodeId s : index.seeds())
    w.u32(s);

  for (const auto &adj : index.graph()) {
    if (adj.size() > 0xffff)
      throw Error("node degree exceeds the DEG1 limit of 65535");
    w.u16(static_cast<std::uint16_t>(adj.size()));
    for (const auto &e : adj) {
      w.u32(e.target);
      auto q = quantize_range(e.range);
      w.u16(static_cast<std::uint16_t>(q.size()));
      for (auto [lo, hi] : q) {
        w.u16(lo);
        w.u16(hi);
      }
    }
  }
  return w.bytes();
}

DegIndex deserialize(std::vector<char> bytes, const std::string &name) {
  io::Reader r(std::move(bytes), name);
  r.expect_magic("DEG1");
  if (std::uint32_t v = r.u32(); v != kIndexVersion)
    throw Error("'" + name + "': unsupported version " + std::to_string(v));

  IndexMeta meta;
  meta.max_degree = r.u32();
  meta.ef_construction = r.u32();
  meta.min_active = r.f64();
  meta.e_max = r.f64();
  meta.s_max = r.f64();
  meta.norm_eps = r.f64();
  meta.e_dim = r.u32();
  meta.s_dim = r.u32();
  meta.n = r.u32();
  if (!(meta.e_max > 0.0) || !(meta.s_max > 0.0))
    throw Error("'" + name + "': corrupt normalization factors");

  Centroid centroid;
  r.need((static_cast<std::size_t>(meta.e_dim) + meta.s_dim) * 4);
  centroid.e.resize(meta.e_dim);
  centroid.s.resize(meta.s_dim);
  for (auto &x : centroid.e)
    x = r.f32();
  for (auto &x : centroid.s)
    x = r.f32();

  std::uint32_t seed_count = r.u32();
  r.need(static_cast<std::size_t>(seed_count) * 4);
  std::vector<NodeId> seeds(seed_count);
  for (auto &s : seeds) {
    s = r.u32();
    if (s >= meta.n)
      throw Error("'" + name + "': seed id out of range");
  }

  r.need(static_cast<std::size_t>(meta.n) * 2);
  DynamicGraph graph(meta.n);
  for (auto &adj : graph) {
    std::uint16_t count = r.u16();
    adj.reserve(count);
    for (std::uint16_t i = 0; i < count; ++i) {
      DynamicEdge e;
      e.target = r.u32();
      if (e.target >= meta.n)
        throw Error("'" + name + "': edge target out of range");
      std::uint16_t intervals = r.u16();
      std::vector<Interval> ivs;
      ivs.reserve(intervals);
      for (std::uint16_t j = 0; j < intervals; ++j) {
        std::uint16_t lo = r.u16();
        std::uint16_t hi = r.u16();
        if (lo > hi || hi > kRangeGrid)
          throw Error("'" + name + "': corrupt active range");
        ivs.push_back({dequantize(lo), dequantize(hi)});
      }
      e.range = IntervalSet(std::move(ivs));
      adj.push_back(std::move(e));
    }
  }
  r.expect_end();
  return DegIndex(meta, std::move(centroid), std::move(seeds), std::move(graph));
}

void save(const DegIndex &index, const std::string &path) {
  auto bytes = serialize(index);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error("cannot open '" + path + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out)
    throw Error("write to '" + path + "' failed");
}

DegIndex load(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot open '" + path + "'");
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  return deserialize(std::move(bytes), path);
}

} // namespace deg
