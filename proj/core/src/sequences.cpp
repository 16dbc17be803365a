#include "framelab/sequences.hpp"

namespace framelab {

std::vector<Rat> generate_vector(const VectorSequenceRule& rule, std::uint64_t i, int coords) {
  if (i == 0) throw PreconditionViolation("vector indices are 1-based");
  std::vector<Rat> v(coords, 0);
  switch (rule.kind) {
    case VectorSequenceRule::Kind::Canonical:
      if (i <= std::uint64_t(coords)) v[i - 1] = 1;
      return v;
    case VectorSequenceRule::Kind::PowersOfTwoFamily: {
      // f_i = sum_{k=0}^{n-1} 1/(2^i + k) e_{k+1}
      mpz_class p = 1;
      p <<= i;  // 2^i
      for (int k = 0; k < rule.family_n && k < coords; ++k) {
        Rat r(1, 1);
        r /= Rat(p + k);
        v[k] = r;
      }
      return v;
    }
    case VectorSequenceRule::Kind::PairSums: {
      // pairs ordered by larger index then smaller: (1,2),(1,3),(2,3),(1,4),...
      std::uint64_t idx = i - 1;
      std::uint64_t hi = 2;
      while (idx >= hi - 1) {
        idx -= hi - 1;
        ++hi;
      }
      const std::uint64_t lo = idx + 1;
      if (lo <= std::uint64_t(coords)) v[lo - 1] = 1;
      if (hi <= std::uint64_t(coords)) v[hi - 1] = 1;
      return v;
    }
    case VectorSequenceRule::Kind::ExplicitList: {
      if (i > rule.list.size()) throw PreconditionViolation("explicit list exhausted");
      const auto& src = rule.list[i - 1];
      for (int k = 0; k < coords && k < int(src.size()); ++k) v[k] = src[k];
      return v;
    }
  }
  throw std::logic_error("unreachable");
}

FinitelyFullSparkResult finitely_full_spark_check(const VectorSequenceRule& rule,
                                                  const std::vector<int>& coord_set,
                                                  std::uint64_t truncation,
                                                  const SweepOptions& opt) {
  const int k = int(coord_set.size());
  if (k == 0 || k > 12) throw PreconditionViolation("coordinate set size must be in [1, 12]");
  if (truncation < std::uint64_t(k) || truncation > 64)
    throw PreconditionViolation("truncation must be in [|I|, 64]");
  int max_coord = 0;
  for (int c : coord_set) {
    if (c < 1) throw PreconditionViolation("coordinates are 1-based");
    max_coord = std::max(max_coord, c);
  }
  // Coordinate restriction P_I: keep only the rows indexed by I.
  Mat projected(k, int(truncation));
  for (std::uint64_t i = 1; i <= truncation; ++i) {
    const auto full = generate_vector(rule, i, max_coord);
    for (int r = 0; r < k; ++r) projected(r, int(i - 1)) = full[coord_set[r] - 1];
  }
  // Every k-subset of the projected family must have rank k.
  const auto subsets = combinations(int(truncation), k);
  const auto hit = parallel_find_first(subsets.size(), opt.jobs, [&](std::size_t s) {
    return rank(projected.select_cols(mask_to_indices(subsets[s], int(truncation)))) < k;
  });
  if (hit) {
    std::vector<std::uint64_t> dep;
    for (int idx : mask_to_indices(subsets[*hit], int(truncation)))
      dep.push_back(std::uint64_t(idx) + 1);
    return {false, dep};
  }
  return {true, std::nullopt};
}

ComplementPropertyResult truncated_complement_property(int n, SweepOptions opt) {
  if (n < 2 || n > 8) throw PreconditionViolation("dimension must be in [2, 8]");
  std::vector<std::vector<Rat>> vecs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      std::vector<Rat> v(n, 0);
      v[i] = 1;
      v[j] = 1;
      vecs.push_back(std::move(v));
    }
  opt.max_subset_bits = std::max(opt.max_subset_bits, int(vecs.size()));
  return has_complement_property(Frame::from_vectors(n, vecs), opt);
}

std::vector<std::pair<int, Rat>> bessel_violation_probe(int n) {
  if (n < 2 || n > 512) throw PreconditionViolation("truncation must be in [2, 512]");
  std::vector<std::pair<int, Rat>> table;
  const auto rule = VectorSequenceRule::pair_sums();
  for (int t = 2; t <= n; ++t) {
    Rat sum = 0;
    const std::uint64_t pairs = std::uint64_t(t) * (t - 1) / 2;
    for (std::uint64_t i = 1; i <= pairs; ++i) {
      const auto v = generate_vector(rule, i, t);
      sum += v[0] * v[0];  // |<e_1, f_i>|^2
    }
    table.emplace_back(t, sum);
  }
  return table;
}

}  // namespace framelab
