#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

namespace framelab {

/// Index subsets of [m] as bitmasks, bit i = element i.
using SubsetMask = std::uint32_t;

inline std::vector<int> mask_to_indices(SubsetMask mask, int m) {
  std::vector<int> idx;
  for (int i = 0; i < m; ++i)
    if (mask >> i & 1u) idx.push_back(i);
  return idx;
}

inline SubsetMask indices_to_mask(const std::vector<int>& idx) {
  SubsetMask mask = 0;
  for (int i : idx) mask |= SubsetMask(1) << i;
  return mask;
}

/// All k-subsets of [m] in lexicographic order of their index sets:
/// {0,1} < {0,2} < ... < {m-2,m-1}.
std::vector<SubsetMask> combinations(int m, int k);

/// Subsets of [m] with |I| <= max_size, sizes ascending, lexicographic
/// within each size. This is the canonical sweep order: the first failing
/// subset in this order is the reported witness.
std::vector<SubsetMask> sweep_order(int m, int max_size);

/// Smallest index i in [0, count) with pred(i) true, or nullopt.
/// The range is split across `jobs` workers; the reduction keeps the
/// minimum, so the result is identical for any worker count.
std::optional<std::size_t> parallel_find_first(std::size_t count, int jobs,
                                               const std::function<bool(std::size_t)>& pred);

}  // namespace framelab
