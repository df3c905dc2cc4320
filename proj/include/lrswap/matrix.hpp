#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "lrswap/rational.hpp"

namespace lrswap {

// Dense row-major matrix over Rational or double.
template <class S>
class Matrix {
 public:
  using value_type = S;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = S(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  S& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const S& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const S> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  bool is_zero() const {
    for (const S& v : data_)
      if (!lrswap::is_zero(v)) return false;
    return true;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  Matrix& operator+=(const Matrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Matrix& operator*=(const S& s) {
    for (S& v : data_) v *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const S& s) { return a *= s; }
  friend Matrix operator*(const S& s, Matrix a) { return a *= s; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product shape mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const S& aik = a(i, k);
        if (lrswap::is_zero(aik)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          const S& bkj = b(k, j);
          if (lrswap::is_zero(bkj)) continue;
          c(i, j) += aik * bkj;
        }
      }
    }
    return c;
  }

 private:
  void require_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<S> data_;
};

template <class S>
Matrix<S> kron(const Matrix<S>& a, const Matrix<S>& b) {
  Matrix<S> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t r1 = 0; r1 < a.rows(); ++r1)
    for (std::size_t c1 = 0; c1 < a.cols(); ++c1) {
      const S& x = a(r1, c1);
      if (is_zero(x)) continue;
      for (std::size_t r2 = 0; r2 < b.rows(); ++r2)
        for (std::size_t c2 = 0; c2 < b.cols(); ++c2)
          if (!is_zero(b(r2, c2))) out(r1 * b.rows() + r2, c1 * b.cols() + c2) = x * b(r2, c2);
    }
  return out;
}

// Rows and columns selected by the same index list, re-indexed densely.
template <class S>
Matrix<S> principal_submatrix(const Matrix<S>& m, std::span<const std::size_t> idx) {
  Matrix<S> out(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = m(idx[i], idx[j]);
  return out;
}

template <class S>
Matrix<S> power(const Matrix<S>& m, int k) {
  Matrix<S> out = Matrix<S>::identity(m.rows());
  for (int i = 0; i < k; ++i) out = out * m;
  return out;
}

inline Matrix<double> to_double(const Matrix<Rational>& m) {
  Matrix<double> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).get_d();
  return out;
}
inline const Matrix<double>& to_double(const Matrix<double>& m) { return m; }

// Largest |a_ij - b_ij|.
template <class S>
S max_abs_difference(const Matrix<S>& a, const Matrix<S>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("matrix shape mismatch");
  S best(0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      S d = abs_value(S(a(i, j) - b(i, j)));
      if (d > best) best = d;
    }
  return best;
}

}  // namespace lrswap
