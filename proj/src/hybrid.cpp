#include "deg/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "deg/error.hpp"

namespace deg {

VectorSet::VectorSet(std::size_t dim, std::vector<float> data)
    : dim_(dim), data_(std::move(data)) {
  if (dim_ == 0)
    throw Error("vector dimension must be positive");
  if (data_.size() % dim_ != 0)
    throw Error("vector data size " + std::to_string(data_.size()) +
                " is not a multiple of dimension " + std::to_string(dim_));
}

void VectorSet::push_back(std::span<const float> v) {
  if (dim_ == 0)
    dim_ = v.size();
  if (v.size() != dim_ || dim_ == 0)
    throw Error("vector dimension mismatch");
  data_.insert(data_.end(), v.begin(), v.end());
}

DiameterEstimator default_estimator(std::size_t n) {
  if (n <= 20000)
    return ExactDiameter{};
  return SampledDiameter{};
}

HybridDataset::HybridDataset(VectorSet e, VectorSet s, double e_max,
                             double s_max, double norm_eps)
    : e_(std::move(e)), s_(std::move(s)), e_max_(e_max), s_max_(s_max),
      norm_eps_(norm_eps) {
  if (e_.empty() || s_.empty())
    throw Error("dataset must contain at least one object");
  if (e_.size() != s_.size())
    throw Error("modality size mismatch: " + std::to_string(e_.size()) +
                " e-vectors vs " + std::to_string(s_.size()) + " s-vectors");
  if (!(e_max_ > 0.0) || !(s_max_ > 0.0))
    throw Error("normalization factors must be positive");
}

namespace {

double exact_diameter(const VectorSet &v) {
  double best = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      best = std::max(best, euclidean(v.row(i), v.row(j)));
  return best;
}

double sampled_diameter(const VectorSet &v, const SampledDiameter &est,
                        std::mt19937_64 &rng) {
  if (v.size() < 2)
    return 0.0;
  std::uniform_int_distribution<std::size_t> pick(0, v.size() - 1);
  double best = 0.0;
  for (std::size_t p = 0; p < est.pairs; ++p) {
    std::size_t i = pick(rng);
    std::size_t j = pick(rng);
    if (i != j)
      best = std::max(best, euclidean(v.row(i), v.row(j)));
  }
  return best * (1.0 + est.margin);
}

} // namespace

HybridDataset normalize_dataset(VectorSet e, VectorSet s,
                                const DiameterEstimator &estimator) {
  if (e.empty() || s.empty())
    throw Error("dataset must contain at least one object");
  if (e.size() != s.size())
    throw Error("modality size mismatch: " + std::to_string(e.size()) +
                " e-vectors vs " + std::to_string(s.size()) + " s-vectors");

  double e_max = 0.0, s_max = 0.0, eps = 0.0;
  if (const auto *sampled = std::get_if<SampledDiameter>(&estimator)) {
    if (sampled->margin < 0.0)
      throw Error("sampling margin must be non-negative");
    std::mt19937_64 rng(sampled->seed);
    e_max = sampled_diameter(e, *sampled, rng);
    s_max = sampled_diameter(s, *sampled, rng);
    eps = sampled->margin;
  } else {
    e_max = exact_diameter(e);
    s_max = exact_diameter(s);
  }
  if (!(e_max > 0.0))
    throw Error("zero e-diameter: all e-vectors are identical");
  if (!(s_max > 0.0))
    throw Error("zero s-diameter: all s-vectors are identical");
  return HybridDataset(std::move(e), std::move(s), e_max, s_max, eps);
}

void validate_query(const HybridDataset &data, const HybridQuery &q) {
  if (q.e.size() != data.e_dim() || q.s.size() != data.s_dim())
    throw Error("query dimensions do not match dataset");
  if (!(q.alpha >= 0.0 && q.alpha <= 1.0))
    throw Error("query alpha must lie in [0, 1]");
  if (q.k < 1 || q.k > data.size())
    throw Error("query k must lie in [1, n]");
}

DistPair dist_pair(const HybridDataset &data, const HybridPoint &a, NodeId b) {
  auto pb = data.point(b);
  return {euclidean(a.e, pb.e) / data.e_max(),
          euclidean(a.s, pb.s) / data.s_max()};
}

DistPair dist_pair(const HybridDataset &data, NodeId a, NodeId b) {
  return dist_pair(data, data.point(a), b);
}

double hybrid_dist(const HybridDataset &data, const HybridQuery &q,
                   NodeId id) {
  return dist_pair(data, q.point(), id).at(q.alpha);
}

Centroid compute_centroid(const HybridDataset &data) {
  auto mean = [](const VectorSet &v) {
    std::vector<double> acc(v.dim(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
      auto r = v.row(i);
      for (std::size_t j = 0; j < r.size(); ++j)
        acc[j] += r[j];
    }
    std::vector<float> out(v.dim());
    for (std::size_t j = 0; j < acc.size(); ++j)
      out[j] = static_cast<float>(acc[j] / static_cast<double>(v.size()));
    return out;
  };
  return {mean(data.e_vectors()), mean(data.s_vectors())};
}

} // namespace deg
