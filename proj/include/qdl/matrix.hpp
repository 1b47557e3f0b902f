#pragma once

// Dense row-major matrices over an exact field (Rational, QuadScalar) or
// over SurdSum, plus the handful of elimination routines the rest of the
// library is built on.  Elimination always pivots on the first non-zero
// entry, so results are deterministic.

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qdl/errors.hpp"
#include "qdl/exactnum.hpp"

namespace qdl {

inline bool is_zero(double x) { return x == 0.0; }

namespace detail {
// unqualified call so types declared after this header are found by ADL
template <class T>
bool zero(const T& x) {
  return is_zero(x);
}
}  // namespace detail

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw DimensionError("ragged matrix initializer");
      for (const auto& x : row) data_.push_back(x);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionError("block out of range");
    Matrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw DimensionError("block out of range");
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  Matrix column(std::size_t j) const { return block(0, j, rows_, 1); }
  Matrix row(std::size_t i) const { return block(i, 0, 1, cols_); }

  bool is_zero() const {
    for (const auto& x : data_)
      if (!detail::zero(x)) return false;
    return true;
  }

  template <class F>
  auto map(F&& f) const -> Matrix<decltype(f(std::declval<const T&>()))> {
    Matrix<decltype(f(std::declval<const T&>()))> out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(i, j) = f((*this)(i, j));
    return out;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(const T& s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const T& s) { return a *= s; }
  friend Matrix operator*(const T& s, Matrix a) { return a *= s; }
  friend Matrix operator-(Matrix a) {
    for (auto& x : a.data_) x = -x;
    return a;
  }

  /// Skips zero entries of the left operand; the structured matrices used
  /// throughout are very sparse.
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_)
      throw DimensionError("matrix product " + a.shape() + " * " + b.shape());
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (detail::zero(aik)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          const T& bkj = b(k, j);
          if (detail::zero(bkj)) continue;
          c(i, j) += aik * bkj;
        }
      }
    return c;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

 private:
  void check_same(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw DimensionError("shape mismatch " + shape() + " vs " + o.shape());
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RatMatrix = Matrix<Rational>;
using QMatrix = Matrix<QuadScalar>;

template <class T>
Matrix<T> hstack(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() == 0 && a.cols() == 0) return b;
  if (b.rows() == 0 && b.cols() == 0) return a;
  if (a.rows() != b.rows()) throw DimensionError("hstack row mismatch");
  Matrix<T> m(a.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(0, a.cols(), b);
  return m;
}

template <class T>
Matrix<T> vstack(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() == 0 && a.cols() == 0) return b;
  if (b.rows() == 0 && b.cols() == 0) return a;
  if (a.cols() != b.cols()) throw DimensionError("vstack column mismatch");
  Matrix<T> m(a.rows() + b.rows(), a.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), 0, b);
  return m;
}

template <class T>
bool is_symmetric(const Matrix<T>& m) {
  if (!m.square()) return false;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      if (!(m(i, j) == m(j, i))) return false;
  return true;
}

template <class T>
struct Echelon {
  Matrix<T> reduced;
  std::vector<std::size_t> pivots;  // pivot column per non-zero row
};

/// Reduced row echelon form.
template <class T>
Echelon<T> rref(Matrix<T> m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t p = row;
    while (p < m.rows() && is_zero(m(p, col))) ++p;
    if (p == m.rows()) continue;
    if (p != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
    const T inv = T(1) / m(row, col);
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || is_zero(m(i, col))) continue;
      const T f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j)
        if (!is_zero(m(row, j))) m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return {std::move(m), std::move(pivots)};
}

template <class T>
std::size_t rank(const Matrix<T>& m) {
  return rref(m).pivots.size();
}

/// Basis of {x : m x = 0} as columns; free variables set to 1 in turn.
template <class T>
Matrix<T> null_space(const Matrix<T>& m) {
  const auto e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : e.pivots) is_pivot[c] = true;
  std::vector<std::size_t> free;
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (!is_pivot[c]) free.push_back(c);
  Matrix<T> basis(m.cols(), free.size());
  for (std::size_t k = 0; k < free.size(); ++k) {
    basis(free[k], k) = T(1);
    for (std::size_t r = 0; r < e.pivots.size(); ++r) basis(e.pivots[r], k) = -e.reduced(r, free[k]);
  }
  return basis;
}

/// One solution of m x = b (free variables zero), or nullopt if inconsistent.
template <class T>
std::optional<Matrix<T>> solve(const Matrix<T>& m, const Matrix<T>& b) {
  if (m.rows() != b.rows()) throw DimensionError("solve: row mismatch");
  const auto e = rref(hstack(m, b));
  Matrix<T> x(m.cols(), b.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    if (e.pivots[r] >= m.cols()) return std::nullopt;
    for (std::size_t j = 0; j < b.cols(); ++j) x(e.pivots[r], j) = e.reduced(r, m.cols() + j);
  }
  return x;
}

template <class T>
Matrix<T> inverse(const Matrix<T>& m) {
  if (!m.square()) throw DimensionError("inverse of non-square " + m.shape());
  const auto x = solve(m, Matrix<T>::identity(m.rows()));
  if (!x || rank(m) != m.rows()) throw std::domain_error("inverse of singular matrix");
  return *x;
}

/// True iff the column spans of a and b coincide.
template <class T>
bool same_column_span(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows()) throw DimensionError("span comparison row mismatch");
  const auto ra = rank(a);
  return ra == rank(b) && ra == rank(hstack(a, b));
}

/// True iff every column of a lies in the column span of b.
template <class T>
bool column_span_contains(const Matrix<T>& b, const Matrix<T>& a) {
  if (a.cols() == 0) return true;
  return rank(b) == rank(hstack(b, a));
}

template <class To, class From>
Matrix<To> convert(const Matrix<From>& m) {
  return m.map([](const From& x) { return To(x); });
}

template <class T>
Matrix<double> to_double(const Matrix<T>& m) {
  return m.map([](const T& x) { return to_double(x); });
}

}  // namespace qdl
