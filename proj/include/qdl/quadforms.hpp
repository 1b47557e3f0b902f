#pragma once

// Quadratic forms Q(x) = x^T A x (off-diagonal entries carry the 1/2),
// linear maps M : R^d -> R^s, and the hypotheses of the density theorem.

#include <string>
#include <vector>

#include "qdl/matrix.hpp"

namespace qdl {

class QuadraticForm {
 public:
  QuadraticForm() = default;
  explicit QuadraticForm(QMatrix gram);

  std::size_t dim() const { return gram_.rows(); }
  const QMatrix& gram() const { return gram_; }
  QuadScalar operator()(const std::vector<QuadScalar>& x) const;
  bool is_rational() const;

 private:
  QMatrix gram_;
};

class LinearMap {
 public:
  LinearMap() = default;
  explicit LinearMap(QMatrix rows) : rows_(std::move(rows)) {}

  std::size_t s() const { return rows_.rows(); }
  std::size_t dim() const { return rows_.cols(); }
  const QMatrix& rows() const { return rows_; }

 private:
  QMatrix rows_;
};

struct Signature {
  int p = 0;
  int q = 0;
  int rank() const { return p + q; }
  friend bool operator==(const Signature&, const Signature&) = default;
};

/// T^T A T = diag(values).
struct Diagonalization {
  QMatrix transform;
  std::vector<QuadScalar> values;
};

Diagonalization congruence_diagonalize(const QMatrix& a);
Signature signature(const QMatrix& a);
inline Signature signature(const QuadraticForm& q) { return signature(q.gram()); }

/// Columns span ker M.  Throws HypothesisError("rank_M") if rank M < s.
QMatrix kernel_basis(const LinearMap& m);

/// Gram matrix B^T A B of Q on the column span of B.
QuadraticForm restrict(const QuadraticForm& q, const QMatrix& basis);

/// Rational vectors c with c . k = 0 for every k in ker M, i.e. the rational
/// covectors in the real row span of M.  Columns of the result.
RatMatrix rational_row_span(const QMatrix& kernel);

struct ConditionReport {
  std::size_t d = 0;
  std::size_t s = 0;
  bool dim_ok = false;
  int rank_restricted = 0;
  bool rank_ok = false;
  Signature restricted_signature;
  bool indefinite_restricted = false;
  bool irrationality_ok = false;
  /// False when M was given at float precision; condition 3 is then refused.
  bool irrationality_decidable = true;
  bool nondegenerate = false;
  bool overall = false;
  QMatrix kernel;
  RatMatrix rational_kernel;  // witnesses against condition 3
};

ConditionReport check_conditions(const QuadraticForm& q, const LinearMap& m,
                                 bool float_entries = false);

}  // namespace qdl
