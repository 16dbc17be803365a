#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "framelab/frame.hpp"

namespace framelab {

/// Deterministic generators for the infinite vector families handled at
/// finite truncation. Vector indices are 1-based.
struct VectorSequenceRule {
  enum class Kind { Canonical, PowersOfTwoFamily, PairSums, ExplicitList };
  Kind kind = Kind::Canonical;
  int family_n = 0;  // PowersOfTwoFamily support size
  std::vector<std::vector<Rat>> list;  // ExplicitList

  static VectorSequenceRule canonical() { return {Kind::Canonical, 0, {}}; }
  static VectorSequenceRule powers_of_two(int n) { return {Kind::PowersOfTwoFamily, n, {}}; }
  static VectorSequenceRule pair_sums() { return {Kind::PairSums, 0, {}}; }
  static VectorSequenceRule explicit_list(std::vector<std::vector<Rat>> vs) {
    return {Kind::ExplicitList, 0, std::move(vs)};
  }
};

/// i-th vector of the family (i >= 1), truncated to `coords` coordinates.
/// PairSums are ordered by larger index then smaller:
/// (1,2),(1,3),(2,3),(1,4),...
std::vector<Rat> generate_vector(const VectorSequenceRule& rule, std::uint64_t i, int coords);

struct FinitelyFullSparkResult {
  bool consistent = false;  // pass is truncated evidence only, never a proof
  std::optional<std::vector<std::uint64_t>> dependent_subset;  // 1-based vector indices
};

/// Projects the first N vectors onto the coordinates in I (1-based) and
/// checks every |I|-subset of the projected family for full rank.
FinitelyFullSparkResult finitely_full_spark_check(const VectorSequenceRule& rule,
                                                  const std::vector<int>& coord_set,
                                                  std::uint64_t truncation,
                                                  const SweepOptions& opt = {});

/// Materializes {e_i + e_j : 1 <= i < j <= n} in R^n and runs the exact
/// complement-property check.
ComplementPropertyResult truncated_complement_property(int n, SweepOptions opt = {});

/// Growth of sum_{i<j<=t} |<e_1, e_i+e_j>|^2 for t = 2..n; the value is
/// t - 1, so the Bessel constant is unbounded.
std::vector<std::pair<int, Rat>> bessel_violation_probe(int n);

}  // namespace framelab
