#include "framelab/frame.hpp"

#include <atomic>
#include <thread>

namespace framelab {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::CertifiedYes: return "CertifiedYes";
    case Verdict::CertifiedNo: return "CertifiedNo";
    default: return "Undecided";
  }
}

std::vector<SubsetMask> combinations(int m, int k) {
  std::vector<SubsetMask> out;
  if (k < 0 || k > m) return out;
  if (k == 0) return {0};
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    out.push_back(indices_to_mask(idx));
    int i = k - 1;
    while (i >= 0 && idx[i] == m - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

std::vector<SubsetMask> sweep_order(int m, int max_size) {
  std::vector<SubsetMask> out;
  for (int k = 0; k <= max_size; ++k) {
    auto c = combinations(m, k);
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

std::optional<std::size_t> parallel_find_first(std::size_t count, int jobs,
                                               const std::function<bool(std::size_t)>& pred) {
  if (count == 0) return std::nullopt;
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      if (pred(i)) return i;
    return std::nullopt;
  }
  std::atomic<std::size_t> best{count};
  auto worker = [&](int w) {
    for (std::size_t i = std::size_t(w); i < count; i += std::size_t(jobs)) {
      if (i >= best.load(std::memory_order_relaxed)) return;
      if (pred(i)) {
        std::size_t cur = best.load();
        while (i < cur && !best.compare_exchange_weak(cur, i)) {}
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (int w = 0; w < jobs; ++w) pool.emplace_back(worker, w);
  for (auto& t : pool) t.join();
  const std::size_t found = best.load();
  if (found == count) return std::nullopt;
  return found;
}

Frame Frame::from_vectors(int n, const std::vector<std::vector<Rat>>& vs) {
  if (vs.empty()) throw PreconditionViolation("EmptyFamily");
  Mat cols(n, int(vs.size()));
  for (int j = 0; j < int(vs.size()); ++j) {
    if (int(vs[j].size()) != n) throw DimensionMismatch("ragged rows");
    cols.set_col(j, vs[j]);
  }
  return Frame(n, std::move(cols));
}

namespace {

void check_cap(const Frame& f, const SweepOptions& opt) {
  if (f.count() > opt.max_subset_bits)
    throw PreconditionViolation("frame has m=" + std::to_string(f.count()) +
                                " vectors; raise max_subset_bits to sweep beyond " +
                                std::to_string(opt.max_subset_bits));
}

SubsetMask full_mask(int m) { return m == 32 ? ~SubsetMask(0) : (SubsetMask(1) << m) - 1; }

}  // namespace

std::pair<double, double> frame_bounds(const Frame& f) {
  const Eigen::MatrixXd v = to_float(f.vectors);
  const Eigen::MatrixXd s = v * v.transpose();
  return symmetric_spectrum_bounds(s);
}

std::optional<std::pair<double, double>> riesz_bounds(const Frame& f) {
  if (rank(f.vectors) < f.count()) return std::nullopt;  // dependent: lower bound 0
  const Eigen::MatrixXd v = to_float(f.vectors);
  const Eigen::MatrixXd gram = v.transpose() * v;
  return symmetric_spectrum_bounds(gram);
}

int spark(const Frame& f, const SweepOptions& opt) {
  check_cap(f, opt);
  const int m = f.count();
  for (int k = 1; k <= m; ++k) {
    const auto subsets = combinations(m, k);
    const auto hit = parallel_find_first(subsets.size(), opt.jobs, [&](std::size_t i) {
      return rank(f.subset(subsets[i])) < k;
    });
    if (hit) return k;
  }
  return m + 1;
}

FullSparkResult is_full_spark(const Frame& f, const SweepOptions& opt) {
  check_cap(f, opt);
  const int m = f.count(), n = f.dim;
  if (m < n) throw TooFewVectors("full spark requires m >= n");
  const auto subsets = combinations(m, n);
  const auto hit = parallel_find_first(subsets.size(), opt.jobs, [&](std::size_t i) {
    return rank(f.subset(subsets[i])) < n;
  });
  if (hit) return {false, subsets[*hit]};
  return {true, std::nullopt};
}

ComplementPropertyResult has_complement_property(const Frame& f, const SweepOptions& opt) {
  check_cap(f, opt);
  const int m = f.count(), n = f.dim;
  const SubsetMask all = full_mask(m);
  // |I| <= m/2 suffices: the condition is symmetric in I and I^c.
  const auto subsets = sweep_order(m, m / 2);
  const auto hit = parallel_find_first(subsets.size(), opt.jobs, [&](std::size_t i) {
    const SubsetMask mask = subsets[i];
    const int size = __builtin_popcount(mask);
    if (size >= n && rank(f.subset(mask)) >= n) return false;
    return rank(f.subset(all & ~mask)) < n;
  });
  if (hit) {
    const SubsetMask mask = subsets[*hit];
    PrFailWitness w;
    w.subset = mask;
    w.rank_subset = rank(f.subset(mask));
    w.rank_complement = rank(f.subset(all & ~mask));
    return {false, w};
  }
  return {true, std::nullopt};
}

Decision does_phase_retrieval(const Frame& f, const SweepOptions& opt) {
  const auto cp = has_complement_property(f, opt);
  Decision d;
  if (cp.holds) {
    if (f.count() < 2 * f.dim - 1)
      throw std::logic_error("internal inconsistency: complement property with m < 2n-1");
    d.verdict = Verdict::CertifiedYes;
  } else {
    d.verdict = Verdict::CertifiedNo;
    d.pr_witness = cp.witness;
  }
  return d;
}

Decision does_norm_retrieval(const Frame& f, const SweepOptions& opt) {
  check_cap(f, opt);
  const int m = f.count();
  const SubsetMask all = full_mask(m);
  const auto subsets = sweep_order(m, m / 2);
  std::vector<std::optional<std::pair<std::vector<Rat>, std::vector<Rat>>>> found(subsets.size());
  const auto hit = parallel_find_first(subsets.size(), opt.jobs, [&](std::size_t i) {
    const SubsetMask mask = subsets[i];
    const Subspace u = nullspace(f.subset(mask).transpose());
    const Subspace v = nullspace(f.subset(all & ~mask).transpose());
    auto w = orthogonality_witness(u, v);
    if (!w) return false;
    found[i] = std::move(w);
    return true;
  });
  Decision d;
  if (!hit) {
    d.verdict = Verdict::CertifiedYes;
    return d;
  }
  const auto& [x, y] = *found[*hit];
  NrFailWitness w;
  w.subset = subsets[*hit];
  w.x = x;
  w.y = y;
  w.u.resize(x.size());
  w.v.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    w.u[i] = x[i] + y[i];
    w.v[i] = x[i] - y[i];
  }
  d.verdict = Verdict::CertifiedNo;
  d.nr_witness = std::move(w);
  return d;
}

bool check_orthogonality_of_independent_nr(const Frame& f, const SweepOptions& opt) {
  const int m = f.count(), n = f.dim;
  if (m != n || rank(f.vectors) != n)
    throw PreconditionViolation("requires an independent n-set");
  const Decision d = does_norm_retrieval(f, opt);
  if (d.verdict != Verdict::CertifiedYes) return false;  // implication vacuous
  const Mat gram = f.vectors.transpose() * f.vectors;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j && gram(i, j) != 0)
        throw std::logic_error("internal inconsistency: independent NR set with non-diagonal Gram");
  return true;
}

bool verify_pr_fail_witness(const Frame& f, const PrFailWitness& w) {
  const SubsetMask all = full_mask(f.count());
  return rank(f.subset(w.subset)) < f.dim && rank(f.subset(all & ~w.subset)) < f.dim;
}

bool verify_nr_fail_witness(const Frame& f, const NrFailWitness& w) {
  const int n = f.dim, m = f.count();
  if (int(w.x.size()) != n || int(w.y.size()) != n) return false;
  if (int(w.u.size()) != n || int(w.v.size()) != n) return false;
  for (int i = 0; i < n; ++i)
    if (w.u[i] != w.x[i] + w.y[i] || w.v[i] != w.x[i] - w.y[i]) return false;
  for (int i = 0; i < m; ++i) {
    const auto fi = f.vec(i);
    if (w.subset >> i & 1u) {
      if (dot(w.x, fi) != 0) return false;
    } else {
      if (dot(w.y, fi) != 0) return false;
    }
    // equal measurement magnitudes, compared on squares to stay exact
    const Rat du = dot(w.u, fi), dv = dot(w.v, fi);
    if (du * du != dv * dv) return false;
  }
  return dot(w.x, w.y) != 0 && norm_sq(w.u) != norm_sq(w.v);
}

}  // namespace framelab
