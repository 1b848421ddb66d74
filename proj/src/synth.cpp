#include "deg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "binary_io.hpp"
#include "deg/error.hpp"

namespace deg {

void SynthSpec::validate() const {
  if (n < 1 || e_dim < 1 || s_dim < 1)
    throw Error("synth spec needs n, d, m >= 1");
  if (!(rho >= -1.0 && rho <= 1.0))
    throw Error("correlation must lie in [-1, 1]");
  if (const auto *g = std::get_if<GaussianClusters>(&distribution)) {
    if (g->clusters < 1)
      throw Error("cluster count must be at least 1");
    if (!(g->sigma > 0.0))
      throw Error("cluster sigma must be positive");
  }
}

namespace {

class Generator {
public:
  explicit Generator(const SynthSpec &spec) : spec_(spec), rng_(spec.seed) {
    if (const auto *g = std::get_if<GaussianClusters>(&spec.distribution)) {
      clusters_ = g->clusters;
      sigma_ = g->sigma;
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      e_centers_.resize(clusters_ * spec.e_dim);
      s_centers_.resize(clusters_ * spec.s_dim);
      for (auto &x : e_centers_)
        x = unit(rng_);
      for (auto &x : s_centers_)
        x = unit(rng_);
    }
  }

  void draw(VectorSet &e, VectorSet &s, std::vector<std::uint32_t> *e_ids,
            std::vector<std::uint32_t> *s_ids) {
    std::vector<float> ev(spec_.e_dim), sv(spec_.s_dim);
    if (clusters_ == 0)
      draw_uniform(ev, sv);
    else {
      auto [ce, cs] = draw_clustered(ev, sv);
      if (e_ids)
        e_ids->push_back(ce);
      if (s_ids)
        s_ids->push_back(cs);
    }
    e.push_back(ev);
    s.push_back(sv);
  }

private:
  void draw_uniform(std::vector<float> &ev, std::vector<float> &sv) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (auto &x : ev)
      x = static_cast<float>(unit(rng_));
    const double w = std::abs(spec_.rho);
    for (std::size_t j = 0; j < sv.size(); ++j) {
      double fresh = unit(rng_);
      if (j < ev.size()) {
        double src = spec_.rho >= 0.0 ? ev[j] : 1.0 - ev[j];
        sv[j] = static_cast<float>(w * src + (1.0 - w) * fresh);
      } else {
        sv[j] = static_cast<float>(fresh);
      }
    }
  }

  std::pair<std::uint32_t, std::uint32_t> draw_clustered(std::vector<float> &ev,
                                                         std::vector<float> &sv) {
    std::uniform_int_distribution<std::uint32_t> pick(
        0, static_cast<std::uint32_t>(clusters_ - 1));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, sigma_);

    const std::uint32_t ce = pick(rng_);
    std::uint32_t cs;
    const double coin = unit(rng_);
    if (spec_.rho >= 0.0 && coin < spec_.rho) {
      cs = ce;
    } else if (spec_.rho < 0.0 && coin < -spec_.rho && clusters_ > 1) {
      // Any cluster but ce.
      std::uniform_int_distribution<std::uint32_t> other(
          0, static_cast<std::uint32_t>(clusters_ - 2));
      cs = other(rng_);
      if (cs >= ce)
        ++cs;
    } else {
      cs = pick(rng_);
    }

    for (std::size_t j = 0; j < ev.size(); ++j)
      ev[j] = static_cast<float>(e_centers_[ce * spec_.e_dim + j] + noise(rng_));
    for (std::size_t j = 0; j < sv.size(); ++j)
      sv[j] = static_cast<float>(s_centers_[cs * spec_.s_dim + j] + noise(rng_));
    return {ce, cs};
  }

  const SynthSpec &spec_;
  std::mt19937_64 rng_;
  std::size_t clusters_ = 0;
  double sigma_ = 0.0;
  std::vector<double> e_centers_;
  std::vector<double> s_centers_;
};

} // namespace

SynthData generate(const SynthSpec &spec) {
  spec.validate();
  SynthData out{VectorSet(spec.e_dim, {}), VectorSet(spec.s_dim, {}),
                VectorSet(spec.e_dim, {}), VectorSet(spec.s_dim, {}), {}, {}};
  Generator gen(spec);
  for (std::size_t i = 0; i < spec.n; ++i)
    gen.draw(out.base_e, out.base_s, &out.e_cluster, &out.s_cluster);
  for (std::size_t i = 0; i < spec.query_count; ++i)
    gen.draw(out.query_e, out.query_s, nullptr, nullptr);
  return out;
}

AlphaScheme parse_alpha_scheme(const std::string &text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ':');)
    parts.push_back(part);
  auto num = [&](std::size_t i) {
    try {
      std::size_t used = 0;
      double v = std::stod(parts.at(i), &used);
      if (used != parts[i].size())
        throw Error("");
      return v;
    } catch (const std::exception &) {
      throw Error("malformed alpha scheme '" + text + "'");
    }
  };
  if (parts.empty())
    throw Error("empty alpha scheme");

  const auto &kind = parts[0];
  if (kind == "fixed" && parts.size() == 2) {
    double a = num(1);
    if (!(a >= 0.0 && a <= 1.0))
      throw Error("fixed alpha must lie in [0, 1]");
    return FixedAlpha{a};
  }
  if (kind == "interval" && (parts.size() == 3 || parts.size() == 4)) {
    AlphaInterval iv{num(1), num(2), 7};
    if (parts.size() == 4)
      iv.seed = static_cast<std::uint64_t>(num(3));
    if (!(iv.lo >= 0.0 && iv.lo <= iv.hi && iv.hi <= 1.0))
      throw Error("alpha interval must satisfy 0 <= lo <= hi <= 1");
    return iv;
  }
  if (kind == "grid" && parts.size() <= 2) {
    AlphaGrid g;
    if (parts.size() == 2)
      g.points = static_cast<std::size_t>(num(1));
    if (g.points < 2)
      throw Error("alpha grid needs at least 2 points");
    return g;
  }
  throw Error("malformed alpha scheme '" + text + "'");
}

std::size_t alpha_band(double alpha) {
  for (std::size_t b = 0; b < 5; ++b)
    if (alpha <= kAlphaBands[b + 1])
      return b;
  return 4;
}

namespace {

// Query weights are stored as f32; keep them representable and in range.
double float_within(double a, double lo, double hi) {
  float f = static_cast<float>(a);
  while (f > hi)
    f = std::nextafter(f, -1.0f);
  while (f < lo)
    f = std::nextafter(f, 2.0f);
  return f;
}

} // namespace

std::vector<HybridQuery> make_query_set(const VectorSet &query_e,
                                        const VectorSet &query_s,
                                        const AlphaScheme &scheme,
                                        std::size_t k) {
  if (query_e.size() != query_s.size())
    throw Error("query modality sizes differ");
  if (k < 1)
    throw Error("k must be at least 1");

  auto make = [&](std::size_t i, double alpha) {
    HybridQuery q;
    auto e = query_e.row(i);
    auto s = query_s.row(i);
    q.e.assign(e.begin(), e.end());
    q.s.assign(s.begin(), s.end());
    q.alpha = alpha;
    q.k = k;
    return q;
  };

  std::vector<HybridQuery> out;
  if (const auto *f = std::get_if<FixedAlpha>(&scheme)) {
    for (std::size_t i = 0; i < query_e.size(); ++i)
      out.push_back(make(i, float_within(f->alpha, 0.0, 1.0)));
  } else if (const auto *iv = std::get_if<AlphaInterval>(&scheme)) {
    std::mt19937_64 rng(iv->seed);
    std::uniform_real_distribution<double> pick(iv->lo, iv->hi);
    for (std::size_t i = 0; i < query_e.size(); ++i) {
      out.push_back(make(i, float_within(pick(rng), iv->lo, iv->hi)));
    }
  } else {
    const auto &g = std::get<AlphaGrid>(scheme);
    for (std::size_t p = 0; p < g.points; ++p) {
      double a = float_within(
          static_cast<double>(p) / static_cast<double>(g.points - 1), 0.0, 1.0);
      for (std::size_t i = 0; i < query_e.size(); ++i)
        out.push_back(make(i, a));
    }
  }
  return out;
}

void write_hqry(const std::string &path,
                const std::vector<HybridQuery> &queries) {
  io::Writer w;
  w.magic("HQRY");
  std::uint32_t d = queries.empty() ? 0 : static_cast<std::uint32_t>(queries[0].e.size());
  std::uint32_t m = queries.empty() ? 0 : static_cast<std::uint32_t>(queries[0].s.size());
  std::uint32_t k = queries.empty() ? 0 : static_cast<std::uint32_t>(queries[0].k);
  w.u32(static_cast<std::uint32_t>(queries.size()));
  w.u32(d);
  w.u32(m);
  w.u32(k);
  for (const auto &q : queries) {
    if (q.e.size() != d || q.s.size() != m || q.k != k)
      throw Error("queries in one HQRY file must share d, m and k");
    for (float x : q.e)
      w.f32(x);
    for (float x : q.s)
      w.f32(x);
    w.f32(static_cast<float>(q.alpha));
  }
  w.save(path);
}

std::vector<HybridQuery> read_hqry(const std::string &path) {
  auto r = io::Reader::open(path);
  r.expect_magic("HQRY");
  std::uint32_t count = r.u32();
  std::uint32_t d = r.u32();
  std::uint32_t m = r.u32();
  std::uint32_t k = r.u32();
  r.need(static_cast<std::size_t>(count) * (d + m + 1) * 4);
  std::vector<HybridQuery> out(count);
  for (auto &q : out) {
    q.e.resize(d);
    q.s.resize(m);
    for (auto &x : q.e)
      x = r.f32();
    for (auto &x : q.s)
      x = r.f32();
    q.alpha = r.f32();
    q.k = k;
    if (!(q.alpha >= 0.0 && q.alpha <= 1.0))
      throw Error("'" + path + "': query alpha outside [0, 1]");
  }
  r.expect_end();
  return out;
}

} // namespace deg
