#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "framelab/linalg.hpp"
#include "framelab/subset_sweep.hpp"

namespace framelab {

enum class Verdict { CertifiedYes, CertifiedNo, Undecided };

std::string to_string(Verdict v);

/// Ordered family of m vectors in R^n, stored as the n x m column matrix.
/// Zero vectors are legal members (they affect spark, never spans).
struct Frame {
  int dim = 0;
  Mat vectors;  // n x m

  Frame() = default;
  Frame(int n, Mat cols) : dim(n), vectors(std::move(cols)) {
    if (vectors.rows() != dim) throw DimensionMismatch("frame vector length != dim");
    if (vectors.cols() < 1) throw PreconditionViolation("EmptyFamily");
  }
  static Frame from_vectors(int n, const std::vector<std::vector<Rat>>& vs);

  int count() const { return vectors.cols(); }
  std::vector<Rat> vec(int i) const { return vectors.col(i); }

  /// Columns indexed by the mask, as a matrix.
  Mat subset(SubsetMask mask) const { return vectors.select_cols(mask_to_indices(mask, count())); }
};

/// Subset I with rank(I) < n and rank(I^c) < n: defeats the complement
/// property and hence phase retrieval.
struct PrFailWitness {
  SubsetMask subset = 0;
  int rank_subset = 0;
  int rank_complement = 0;
};

/// Subset I with (span I)^perp not orthogonal to (span I^c)^perp. The pair
/// u = x+y, v = x-y has equal measurement magnitudes but different norms.
struct NrFailWitness {
  SubsetMask subset = 0;
  std::vector<Rat> x, y, u, v;
};

struct Decision {
  Verdict verdict = Verdict::Undecided;
  std::optional<PrFailWitness> pr_witness;
  std::optional<NrFailWitness> nr_witness;
};

/// Enumeration caps: exact CP/NR checks are exponential in m.
struct SweepOptions {
  int jobs = 1;
  int max_subset_bits = 24;  // refuse frames with m beyond this unless raised
};

struct TooFewVectors : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Eigen-bounds of the frame operator S = sum f_i f_i^T. Float only.
std::pair<double, double> frame_bounds(const Frame& f);

/// Eigen-bounds of the Gram matrix; nullopt when the vectors are dependent.
std::optional<std::pair<double, double>> riesz_bounds(const Frame& f);

/// Smallest cardinality of a dependent subset; m+1 when all independent.
int spark(const Frame& f, const SweepOptions& opt = {});

struct FullSparkResult {
  bool full_spark = false;
  std::optional<SubsetMask> failing_subset;  // first non-spanning n-subset
};
FullSparkResult is_full_spark(const Frame& f, const SweepOptions& opt = {});

struct ComplementPropertyResult {
  bool holds = false;
  std::optional<PrFailWitness> witness;
};
ComplementPropertyResult has_complement_property(const Frame& f, const SweepOptions& opt = {});

Decision does_phase_retrieval(const Frame& f, const SweepOptions& opt = {});
Decision does_norm_retrieval(const Frame& f, const SweepOptions& opt = {});

/// For an independent n-set: if norm retrieval holds, the Gram matrix must be
/// diagonal. Returns whether the implication was exercised (NR was Yes);
/// throws on an internal inconsistency.
bool check_orthogonality_of_independent_nr(const Frame& f, const SweepOptions& opt = {});

/// Certificate re-verification, independent of the sweeps that found them.
bool verify_pr_fail_witness(const Frame& f, const PrFailWitness& w);
bool verify_nr_fail_witness(const Frame& f, const NrFailWitness& w);

}  // namespace framelab
