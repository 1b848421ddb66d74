#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace deg {

/// Outcome of one oracle suite.
struct VerifyReport {
  std::string suite;
  bool passed = false;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string detail;
};

/// The three worked triangles with their expected pruning ranges.
VerifyReport verify_table1();

/// Random triangles x 21 grid weights: inside the pruning range both strict
/// triangle inequalities hold, outside it at least one fails. Weights within
/// 1e-9 of an interior range endpoint are skipped.
VerifyReport verify_lemma32(std::size_t triangles, std::uint64_t seed);

/// Random objects: for sampled focal nodes and 21 weights the brute-force
/// nearest neighbor lies in the first skyline layer, and that layer matches
/// the O(n^2) skyline oracle.
VerifyReport verify_theorem31(std::size_t n, std::size_t focal_count,
                              std::uint64_t seed);

/// Full-candidate build (M = ef_construction = n - 1, th = 0): at every grid
/// weight the active edges form the exact RNG, and greedy search reaches the
/// exact nearest neighbor for `queries` random queries.
VerifyReport verify_rng(std::size_t n, std::size_t queries, std::uint64_t seed);

/// After building n nodes the seeds equal the brute-force inverse skyline
/// of centroid distances.
VerifyReport verify_seeds(std::size_t n, std::uint64_t seed);

/// save -> load -> save is byte-identical, loaded ranges contain the built
/// ones, and loaded-index recall@10 stays within 1e-3 of the in-memory one.
VerifyReport verify_roundtrip(std::size_t n, std::size_t queries,
                              std::uint64_t seed);

std::vector<std::string> verify_suite_names();

/// Runs one named suite ("all" runs every suite). `n == 0` picks the
/// suite's default size.
std::vector<VerifyReport> run_verify(const std::string &suite, std::size_t n,
                                     std::uint64_t seed);

} // namespace deg
