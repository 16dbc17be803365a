#pragma once

#include <Eigen/Core>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "framelab/rational.hpp"

namespace framelab {

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Dense row-major matrix over exact rationals.
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(std::size_t(rows) * cols) {
    if (rows < 0 || cols < 0) throw DimensionMismatch("negative matrix dimension");
  }

  /// Row-major nested initializer, e.g. Mat::from_rows({{1,0},{0,1}}).
  static Mat from_rows(std::initializer_list<std::initializer_list<int>> rows) {
    const int r = int(rows.size());
    const int c = r ? int(rows.begin()->size()) : 0;
    Mat m(r, c);
    int i = 0;
    for (const auto& row : rows) {
      if (int(row.size()) != c) throw DimensionMismatch("ragged rows");
      int j = 0;
      for (int v : row) m(i, j++) = v;
      ++i;
    }
    return m;
  }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Rat& operator()(int i, int j) { return a_[std::size_t(i) * cols_ + j]; }
  const Rat& operator()(int i, int j) const { return a_[std::size_t(i) * cols_ + j]; }

  Mat transpose() const {
    Mat t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Mat operator*(const Mat& o) const {
    if (cols_ != o.rows_) throw DimensionMismatch("matrix product shape");
    Mat p(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const Rat& v = (*this)(i, k);
        if (v == 0) continue;
        for (int j = 0; j < o.cols_; ++j) p(i, j) += v * o(k, j);
      }
    return p;
  }

  Mat operator+(const Mat& o) const { return combine(o, +1); }
  Mat operator-(const Mat& o) const { return combine(o, -1); }

  Mat scaled(const Rat& s) const {
    Mat m(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] * s;
    return m;
  }

  bool operator==(const Mat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

  bool is_zero() const {
    for (const auto& v : a_)
      if (v != 0) return false;
    return true;
  }

  std::vector<Rat> col(int j) const {
    std::vector<Rat> v(rows_);
    for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  void set_col(int j, const std::vector<Rat>& v) {
    for (int i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  /// New matrix keeping only the listed columns, in order.
  Mat select_cols(const std::vector<int>& idx) const {
    Mat m(rows_, int(idx.size()));
    for (int j = 0; j < int(idx.size()); ++j)
      for (int i = 0; i < rows_; ++i) m(i, j) = (*this)(i, idx[j]);
    return m;
  }

  /// Horizontal concatenation [this | o].
  Mat hcat(const Mat& o) const {
    if (rows_ != o.rows_) throw DimensionMismatch("hcat row count");
    Mat m(rows_, cols_ + o.cols_);
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
      for (int j = 0; j < o.cols_; ++j) m(i, cols_ + j) = o(i, j);
    }
    return m;
  }

 private:
  Mat combine(const Mat& o, int sign) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix sum shape");
    Mat m(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) {
      if (sign > 0) m.a_[k] = a_[k] + o.a_[k];
      else m.a_[k] = a_[k] - o.a_[k];
    }
    return m;
  }

  int rows_, cols_;
  std::vector<Rat> a_;
};

inline Rat dot(const std::vector<Rat>& x, const std::vector<Rat>& y) {
  if (x.size() != y.size()) throw DimensionMismatch("dot product length");
  Rat s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline Rat norm_sq(const std::vector<Rat>& x) { return dot(x, x); }

inline Eigen::MatrixXd to_float(const Mat& m) {
  Eigen::MatrixXd f(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) f(i, j) = to_double(m(i, j));
  return f;
}

}  // namespace framelab
