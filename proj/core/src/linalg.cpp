#include "framelab/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace framelab {

namespace {

// Scale each row by the lcm of its denominators. Row scaling by nonzero
// rationals preserves rank, and the result is an integer matrix suitable
// for fraction-free elimination.
std::vector<std::vector<mpz_class>> integerize_rows(const Mat& m) {
  std::vector<std::vector<mpz_class>> z(m.rows(), std::vector<mpz_class>(m.cols()));
  for (int i = 0; i < m.rows(); ++i) {
    mpz_class l = 1;
    for (int j = 0; j < m.cols(); ++j) {
      mpz_class d = m(i, j).get_den();
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
    }
    for (int j = 0; j < m.cols(); ++j) {
      const Rat& v = m(i, j);
      z[i][j] = v.get_num() * (l / v.get_den());
    }
  }
  return z;
}

// Reduced row echelon form in place; returns pivot column indices.
std::vector<int> rref(Mat& m) {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
    int p = -1;
    for (int i = r; i < m.rows(); ++i)
      if (m(i, c) != 0) { p = i; break; }
    if (p < 0) continue;
    if (p != r)
      for (int j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    const Rat inv = 1 / m(r, c);
    for (int j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (int i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      const Rat f = m(i, c);
      for (int j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

int rank(const Mat& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  auto a = integerize_rows(m);
  const int rows = m.rows(), cols = m.cols();
  mpz_class prev = 1;
  int rk = 0;
  for (int c = 0; c < cols && rk < rows; ++c) {
    int p = -1;
    for (int i = rk; i < rows; ++i)
      if (a[i][c] != 0) { p = i; break; }
    if (p < 0) continue;
    if (p != rk) std::swap(a[p], a[rk]);
    // Bareiss step: exact division by the previous pivot.
    for (int i = rk + 1; i < rows; ++i) {
      for (int j = c + 1; j < cols; ++j) {
        mpz_class t = a[rk][c] * a[i][j] - a[i][c] * a[rk][j];
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        a[i][j] = t;
      }
      a[i][c] = 0;
    }
    prev = a[rk][c];
    ++rk;
  }
  return rk;
}

int rank_float(const Eigen::MatrixXd& m, double eps) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  double max_col = 0;
  for (int j = 0; j < m.cols(); ++j) max_col = std::max(max_col, m.col(j).norm());
  if (max_col == 0) return 0;
  const double thresh = eps * max_col;
  Eigen::MatrixXd a = m;
  const int rows = int(a.rows()), cols = int(a.cols());
  int rk = 0;
  std::vector<bool> used(cols, false);
  for (int step = 0; step < rows && rk < rows; ++step) {
    // column pivoting: largest remaining column entry below row rk
    int pc = -1, pr = -1;
    double best = thresh;
    for (int j = 0; j < cols; ++j) {
      if (used[j]) continue;
      for (int i = rk; i < rows; ++i) {
        if (std::abs(a(i, j)) > best) { best = std::abs(a(i, j)); pc = j; pr = i; }
      }
    }
    if (pc < 0) break;
    used[pc] = true;
    a.row(pr).swap(a.row(rk));
    for (int i = rk + 1; i < rows; ++i) {
      const double f = a(i, pc) / a(rk, pc);
      a.row(i) -= f * a.row(rk);
    }
    ++rk;
  }
  return rk;
}

Subspace nullspace(const Mat& m) {
  const int n = m.cols();
  Mat r = m;
  const auto pivots = rref(r);
  std::vector<bool> is_pivot(n, false);
  for (int c : pivots) is_pivot[c] = true;
  Mat basis(n, n - int(pivots.size()));
  int k = 0;
  for (int c = 0; c < n; ++c) {
    if (is_pivot[c]) continue;
    basis(c, k) = 1;
    for (int i = 0; i < int(pivots.size()); ++i) basis(pivots[i], k) = -r(i, c);
    ++k;
  }
  return Subspace(n, std::move(basis));
}

Subspace span_of_columns(const Mat& m) {
  Mat r = m;
  const auto pivots = rref(r);
  return Subspace(m.rows(), m.select_cols(pivots));
}

Subspace orthogonal_complement(const Subspace& w) {
  return nullspace(w.basis.transpose());
}

Mat inverse(const Mat& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("inverse of non-square matrix");
  Mat aug = m.hcat(Mat::identity(m.rows()));
  const auto pivots = rref(aug);
  // A singular left block makes rref pivot inside the identity columns, so
  // counting pivots is not enough: they must all lie in the left block.
  if (int(pivots.size()) != m.rows() || (!pivots.empty() && pivots.back() >= m.rows()))
    throw PreconditionViolation("singular matrix");
  std::vector<int> right(m.rows());
  for (int j = 0; j < m.rows(); ++j) right[j] = m.rows() + j;
  return aug.select_cols(right);
}

Mat projection_matrix(const Subspace& w) {
  if (w.dim() == 0) return Mat(w.ambient, w.ambient);
  const Mat& b = w.basis;
  Mat gram = b.transpose() * b;
  Mat ginv;
  try {
    ginv = inverse(gram);
  } catch (const PreconditionViolation&) {
    throw PreconditionViolation("subspace basis columns are not independent");
  }
  return b * ginv * b.transpose();
}

bool perp_orthogonal(const Subspace& u, const Subspace& v) {
  return !orthogonality_witness(u, v).has_value();
}

std::optional<std::pair<std::vector<Rat>, std::vector<Rat>>> orthogonality_witness(
    const Subspace& u, const Subspace& v) {
  if (u.ambient != v.ambient) throw DimensionMismatch("subspaces in different ambient dims");
  const Mat inner = u.basis.transpose() * v.basis;
  for (int i = 0; i < inner.rows(); ++i)
    for (int j = 0; j < inner.cols(); ++j)
      if (inner(i, j) != 0) return std::make_pair(u.basis.col(i), v.basis.col(j));
  return std::nullopt;
}

std::pair<double, double> symmetric_spectrum_bounds(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("spectrum of non-square matrix");
  if (!m.isApprox(m.transpose(), 1e-12))
    throw PreconditionViolation("matrix is not symmetric");
  if (m.rows() == 0) return {0.0, 0.0};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {ev(0), ev(ev.size() - 1)};
}

bool in_span(const Mat& basis, const std::vector<Rat>& v) {
  if (int(v.size()) != basis.rows()) throw DimensionMismatch("vector length != ambient dim");
  Mat col(basis.rows(), 1);
  col.set_col(0, v);
  return rank(basis) == rank(basis.hcat(col));
}

}  // namespace framelab
