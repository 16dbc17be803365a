#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "framelab/frame.hpp"

namespace framelab {

struct WeightedSubspace {
  Subspace space;
  Rat weight = 1;  // must be > 0
};

struct FusionFrame {
  int dim = 0;
  std::vector<WeightedSubspace> members;

  FusionFrame() = default;
  FusionFrame(int n, std::vector<WeightedSubspace> ms);
  int count() const { return int(members.size()); }
  Mat projection(int i) const { return projection_matrix(members[i].space); }
};

struct NonAxisAligned : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NonUnitary : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Which rule of the norm-retrieval pipeline produced the verdict.
enum class FusionRule {
  None,
  Tight,                 // exact tightness: sum v_i^2 P_i = A I
  IndicatorRowSpace,     // axis-aligned coordinate decision
  OrthogonalityFailure,  // perpendicular-complement necessary condition
  SpanFalsifier,         // sampled x with x not in span{P_i x}
};
std::string to_string(FusionRule r);

/// Witness that a fusion frame fails norm retrieval via non-orthogonal
/// complement intersections over a subset J: ||P_i(x+y)|| = ||P_i(x-y)||
/// for all i while ||x+y|| != ||x-y||.
struct FusionOrthogonalityWitness {
  SubsetMask subset = 0;
  std::vector<Rat> x, y;
};

/// Axis-aligned failure witness, exported as coordinate squares so the
/// equal-projection-norm identity stays exact even when the underlying
/// vectors would need irrational entries.
struct CoordinateSquareWitness {
  std::vector<Rat> u_sq, v_sq;  // entrywise squares of the vector pair
};

struct FusionDecision {
  Verdict verdict = Verdict::Undecided;
  FusionRule rule = FusionRule::None;
  std::optional<Rat> tight_constant;
  std::optional<std::vector<Rat>> indicator_coefficients;  // sum c_i 1_{I_i} = 1
  std::optional<CoordinateSquareWitness> coordinate_witness;
  std::optional<FusionOrthogonalityWitness> orthogonality_witness;
  std::optional<std::vector<Rat>> span_witness;  // x not in span{P_i x}
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

struct FalsifierBudget {
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  int grid = 5;  // random entries are integers in [-grid, grid]
  int jobs = 1;
};

/// Eigen-bounds of sum v_i^2 P_i. Float only.
std::pair<double, double> fusion_bounds(const FusionFrame& ff);

/// Exact tightness test; a tight fusion frame does norm retrieval.
FusionDecision is_tight_then_nr(const FusionFrame& ff);

/// Indicator sets when every member is spanned by canonical basis vectors.
std::optional<std::vector<std::vector<int>>> axis_aligned_indicators(const FusionFrame& ff);

/// Exact decision for axis-aligned members: norm retrieval holds iff the
/// all-ones vector lies in the row space of the indicator incidence matrix.
FusionDecision coordinate_nr_decision(const FusionFrame& ff);

/// Exhaustive +-1 sign search for sum eps_i 1_{I_i} = K(1,...,1), K >= 1.
/// NotFound (nullopt) is not a refutation of norm retrieval.
std::optional<std::pair<std::vector<int>, int>> t13_sign_condition(const FusionFrame& ff);

/// Necessary condition: for every J, the joint complements over J and J^c
/// must be orthogonal. A violation certifies norm retrieval fails; passing
/// is inconclusive.
std::optional<FusionOrthogonalityWitness> necessary_orthogonality_check(
    const FusionFrame& ff, const SweepOptions& opt = {});

/// Samples exact rational x (integer grid plus sparse 0/1 patterns) and
/// reports any x outside span{P_i x} as an exact failure witness.
FusionDecision t5_span_falsifier(const FusionFrame& ff, const FalsifierBudget& budget = {});

/// Pipeline combiner: tight -> coordinate decision -> orthogonality
/// necessary condition -> span falsifier -> Undecided.
FusionDecision decide_norm_retrieval(const FusionFrame& ff, const FalsifierBudget& budget = {},
                                     const SweepOptions& opt = {});

/// Phase-retrieval falsifier via orthonormal-basis concatenations.
struct ConcatFalsifierResult {
  Verdict verdict = Verdict::Undecided;  // CertifiedNo or Undecided
  bool exact = false;                    // exact when a rational ONB concatenation failed CP
  std::optional<PrFailWitness> witness;  // failing subset of the concatenation
  std::uint64_t samples_run = 0;
};
ConcatFalsifierResult concat_onb_falsifier_pr(const FusionFrame& ff, std::uint64_t samples,
                                              std::uint64_t seed, double eps = 1e-8);

/// Builds {v_i f_ij} from per-member local frames (each vector must lie in
/// its subspace, checked exactly).
Frame weighted_local_concat(const FusionFrame& ff,
                            const std::vector<std::vector<std::vector<Rat>>>& local_frames);

/// {T W_i, v_i} for exactly unitary T.
FusionFrame apply_unitary(const FusionFrame& ff, const Mat& t);

/// Splits each member by an internal projection Q_i into Q_i W_i and
/// (I - Q_i) W_i; zero subspaces are dropped.
struct SplitResult {
  FusionFrame fusion;
  int dropped_zero_subspaces = 0;
};
SplitResult split_subspaces(const FusionFrame& ff, const std::vector<Mat>& internal_projections);

/// Extends members of a fusion frame for span{e_1..e_k} to R^n by direct
/// summing span{e_{k+1},...,e_n} onto each member.
FusionFrame extend_nr_to_superspace(const FusionFrame& ff, int n);

/// Witness re-verification.
bool verify_fusion_orthogonality_witness(const FusionFrame& ff,
                                         const FusionOrthogonalityWitness& w);
bool verify_coordinate_square_witness(const FusionFrame& ff, const CoordinateSquareWitness& w);
bool verify_span_witness(const FusionFrame& ff, const std::vector<Rat>& x);
bool verify_indicator_coefficients(const FusionFrame& ff, const std::vector<Rat>& c);

}  // namespace framelab
