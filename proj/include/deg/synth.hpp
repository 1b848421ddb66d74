#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "deg/hybrid.hpp"

namespace deg {

struct UniformCube {};

struct GaussianClusters {
  std::size_t clusters = 20;
  double sigma = 0.05;
};

using SynthDistribution = std::variant<UniformCube, GaussianClusters>;

struct SynthSpec {
  std::size_t n = 5000;
  std::size_t e_dim = 32;
  std::size_t s_dim = 4;
  SynthDistribution distribution = GaussianClusters{};
  /// Modality correlation in [-1, 1]. In cluster mode the two cluster ids
  /// agree with probability rho + (1 - rho) / c for rho >= 0 and
  /// (1 - |rho|) / c for rho < 0.
  double rho = 0.5;
  std::size_t query_count = 1000;
  std::uint64_t seed = 42;

  void validate() const;
};

struct SynthData {
  VectorSet base_e;
  VectorSet base_s;
  VectorSet query_e;
  VectorSet query_s;
  /// Cluster ids per base object (cluster mode only).
  std::vector<std::uint32_t> e_cluster;
  std::vector<std::uint32_t> s_cluster;

  HybridDataset dataset() const { return normalize_dataset(base_e, base_s); }
};

SynthData generate(const SynthSpec &spec);

struct FixedAlpha {
  double alpha = 0.5;
};

/// Uniform alpha per query in [lo, hi].
struct AlphaInterval {
  double lo = 0.0;
  double hi = 1.0;
  std::uint64_t seed = 7;
};

/// Every query repeated at `points` evenly spaced weights from 0 to 1.
struct AlphaGrid {
  std::size_t points = 21;
};

using AlphaScheme = std::variant<FixedAlpha, AlphaInterval, AlphaGrid>;

/// Parses "fixed:A", "interval:LO:HI[:SEED]" or "grid[:POINTS]".
AlphaScheme parse_alpha_scheme(const std::string &text);

/// The five weight intervals used for reporting.
inline constexpr double kAlphaBands[6] = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};

/// Band index in [0, 5) for a weight; boundary values fall in the lower band.
std::size_t alpha_band(double alpha);

std::vector<HybridQuery> make_query_set(const VectorSet &query_e,
                                        const VectorSet &query_s,
                                        const AlphaScheme &scheme,
                                        std::size_t k);

// HQRY: "HQRY" | u32 count | u32 d | u32 m | u32 k | per query d x f32 e,
// m x f32 s, f32 alpha, little-endian.
void write_hqry(const std::string &path, const std::vector<HybridQuery> &queries);
std::vector<HybridQuery> read_hqry(const std::string &path);

} // namespace deg
