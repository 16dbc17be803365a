#pragma once

#include <optional>
#include <utility>

#include "framelab/matrix.hpp"

namespace framelab {

struct UnsupportedInExactMode : std::logic_error {
  using std::logic_error::logic_error;
};

struct PreconditionViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Subspace of R^n given by a basis matrix whose columns are independent.
/// dim() == 0 encodes the zero subspace.
struct Subspace {
  int ambient = 0;
  Mat basis;  // ambient x d

  Subspace() = default;
  Subspace(int n, Mat b) : ambient(n), basis(std::move(b)) {
    if (basis.rows() != ambient) throw DimensionMismatch("basis row count != ambient dim");
  }
  int dim() const { return basis.cols(); }

  static Subspace zero(int n) { return Subspace(n, Mat(n, 0)); }
  static Subspace full(int n) { return Subspace(n, Mat::identity(n)); }
};

/// Rank via fraction-free (Bareiss) elimination on an integer-scaled copy.
int rank(const Mat& m);

/// Float rank: column-pivoted elimination, threshold eps * largest column norm.
int rank_float(const Eigen::MatrixXd& m, double eps);

/// Basis of {x : Mx = 0}.
Subspace nullspace(const Mat& m);

/// Independent subset of the columns of m, as a subspace basis.
Subspace span_of_columns(const Mat& m);

/// Orthogonal complement of a subspace: nullspace of basis^T.
Subspace orthogonal_complement(const Subspace& w);

/// Gauss-Jordan inverse; throws PreconditionViolation when singular.
Mat inverse(const Mat& m);

/// P = B (B^T B)^{-1} B^T. Exact; no orthonormalization required.
Mat projection_matrix(const Subspace& w);

/// True iff every basis vector of u is orthogonal to every basis vector of v.
bool perp_orthogonal(const Subspace& u, const Subspace& v);

/// If u is not orthogonal to v, returns a witness pair (x in u, y in v)
/// with <x,y> != 0 (a basis-vector pair, exact).
std::optional<std::pair<std::vector<Rat>, std::vector<Rat>>> orthogonality_witness(
    const Subspace& u, const Subspace& v);

/// Smallest and largest eigenvalue of a symmetric matrix, 1e-9 relative accuracy.
std::pair<double, double> symmetric_spectrum_bounds(const Eigen::MatrixXd& m);

/// True iff v lies in the span of the columns of basis.
bool in_span(const Mat& basis, const std::vector<Rat>& v);

}  // namespace framelab
