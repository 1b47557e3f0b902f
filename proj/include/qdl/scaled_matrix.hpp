#pragma once

// diag(sqrt l_i) * core * diag(sqrt r_j) with core over Q(sqrt D) and
// positive l_i, r_j in the same field.

#include <vector>

#include "qdl/matrix.hpp"
#include "qdl/surd.hpp"

namespace qdl {

class ScaledMatrix {
 public:
  ScaledMatrix() = default;
  ScaledMatrix(QMatrix core);  // NOLINT
  ScaledMatrix(std::vector<QuadScalar> left_roots, QMatrix core, std::vector<QuadScalar> right_roots);

  static ScaledMatrix identity(std::size_t n) { return ScaledMatrix(QMatrix::identity(n)); }

  std::size_t rows() const { return core_.rows(); }
  std::size_t cols() const { return core_.cols(); }
  const std::vector<QuadScalar>& left_roots() const { return left_; }
  const QMatrix& core() const { return core_; }
  const std::vector<QuadScalar>& right_roots() const { return right_; }

  /// Entry (i, j) as core_ij * sqrt(l_i r_j).
  TaggedScalar entry(std::size_t i, std::size_t j) const;
  Matrix<SurdSum> expand() const;
  /// The plain matrix when no roots remain.
  std::optional<QMatrix> as_field() const;
  Matrix<double> to_double() const;

  ScaledMatrix transpose() const;
  ScaledMatrix inverse() const;
  /// Throws NotRepresentable if an inner root product is not a square.
  friend ScaledMatrix operator*(const ScaledMatrix& a, const ScaledMatrix& b);
  friend bool operator==(const ScaledMatrix& a, const ScaledMatrix& b);
  friend bool operator!=(const ScaledMatrix& a, const ScaledMatrix& b) { return !(a == b); }

 private:
  void normalize();

  std::vector<QuadScalar> left_;
  QMatrix core_;
  std::vector<QuadScalar> right_;
};

std::vector<SurdSum> scaled_apply(const ScaledMatrix& m, const std::vector<QuadScalar>& v);

/// True iff G^T B G = A exactly.
bool congruence_check(const QMatrix& a, const ScaledMatrix& g, const QMatrix& b);

/// Common radicand of all entries (0 if all rational); throws FieldMismatch.
std::int64_t field_of(const QMatrix& m, std::int64_t d = 0);

}  // namespace qdl
