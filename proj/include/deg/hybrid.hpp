#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace deg {

using NodeId = std::uint32_t;

/// Dense row-major collection of equal-length float vectors.
class VectorSet {
public:
  VectorSet() = default;
  VectorSet(std::size_t dim, std::vector<float> data);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : data_.size() / dim_; }
  bool empty() const { return size() == 0; }

  std::span<const float> row(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  void push_back(std::span<const float> v);

  const std::vector<float> &data() const { return data_; }

  friend bool operator==(const VectorSet &, const VectorSet &) = default;

private:
  std::size_t dim_ = 0;
  std::vector<float> data_;
};

/// Euclidean distance accumulated in double precision.
inline double euclidean(std::span<const float> a, std::span<const float> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double diff = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

/// A pair of vectors, one per modality. Non-owning.
struct HybridPoint {
  std::span<const float> e;
  std::span<const float> s;
};

/// Normalized per-modality distances between two hybrid points.
struct DistPair {
  double de = 0.0;
  double ds = 0.0;

  /// Weighted aggregate alpha * de + (1 - alpha) * ds.
  double at(double alpha) const { return alpha * de + (1.0 - alpha) * ds; }

  friend bool operator==(const DistPair &, const DistPair &) = default;
};

struct ExactDiameter {};

/// Max over `pairs` random pairs, inflated by (1 + margin).
struct SampledDiameter {
  std::size_t pairs = 100000;
  double margin = 0.05;
  std::uint64_t seed = 42;
};

using DiameterEstimator = std::variant<ExactDiameter, SampledDiameter>;

/// Exact for n <= 20,000, sampled with 5% margin above.
DiameterEstimator default_estimator(std::size_t n);

/// Two aligned vector collections plus the per-modality normalization
/// diameters. Immutable after construction.
class HybridDataset {
public:
  HybridDataset() = default;

  /// Wraps vectors with known normalization factors (e.g. from an index).
  HybridDataset(VectorSet e, VectorSet s, double e_max, double s_max,
                double norm_eps = 0.0);

  std::size_t size() const { return e_.size(); }
  std::size_t e_dim() const { return e_.dim(); }
  std::size_t s_dim() const { return s_.dim(); }
  double e_max() const { return e_max_; }
  double s_max() const { return s_max_; }
  /// Relative slack of the diameter estimate; 0 for the exact scan.
  double norm_eps() const { return norm_eps_; }

  const VectorSet &e_vectors() const { return e_; }
  const VectorSet &s_vectors() const { return s_; }

  HybridPoint point(NodeId id) const { return {e_.row(id), s_.row(id)}; }

private:
  VectorSet e_;
  VectorSet s_;
  double e_max_ = 1.0;
  double s_max_ = 1.0;
  double norm_eps_ = 0.0;
};

HybridDataset normalize_dataset(VectorSet e, VectorSet s,
                                const DiameterEstimator &estimator);

inline HybridDataset normalize_dataset(VectorSet e, VectorSet s) {
  auto est = default_estimator(e.size());
  return normalize_dataset(std::move(e), std::move(s), est);
}

struct HybridQuery {
  std::vector<float> e;
  std::vector<float> s;
  double alpha = 0.5;
  std::size_t k = 10;

  HybridPoint point() const { return {e, s}; }
};

/// Throws if the query does not fit the dataset (dims, alpha, k).
void validate_query(const HybridDataset &data, const HybridQuery &q);

DistPair dist_pair(const HybridDataset &data, const HybridPoint &a, NodeId b);
DistPair dist_pair(const HybridDataset &data, NodeId a, NodeId b);

/// alpha * delta_e / e_max + (1 - alpha) * delta_s / s_max.
double hybrid_dist(const HybridDataset &data, const HybridQuery &q, NodeId id);

/// Component-wise mean of both modalities.
struct Centroid {
  std::vector<float> e;
  std::vector<float> s;

  HybridPoint point() const { return {e, s}; }

  friend bool operator==(const Centroid &, const Centroid &) = default;
};

Centroid compute_centroid(const HybridDataset &data);

} // namespace deg
