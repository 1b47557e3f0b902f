#include "qdl/quadforms.hpp"

namespace qdl {

QuadraticForm::QuadraticForm(QMatrix gram) : gram_(std::move(gram)) {
  if (!is_symmetric(gram_)) throw std::invalid_argument("gram matrix must be symmetric");
}

QuadScalar QuadraticForm::operator()(const std::vector<QuadScalar>& x) const {
  if (x.size() != dim()) throw DimensionError("quadratic form evaluated on wrong length");
  QuadScalar v;
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = 0; j < dim(); ++j)
      if (!gram_(i, j).is_zero()) v += x[i] * gram_(i, j) * x[j];
  return v;
}

bool QuadraticForm::is_rational() const {
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = 0; j < dim(); ++j)
      if (!gram_(i, j).is_rational()) return false;
  return true;
}

namespace {

// Simultaneous row/column operation: basis vector j += f * basis vector i.
void add_multiple(QMatrix& s, QMatrix& t, std::size_t j, std::size_t i, const QuadScalar& f) {
  const std::size_t n = s.rows();
  for (std::size_t k = 0; k < n; ++k)
    if (!s(k, i).is_zero()) s(k, j) += f * s(k, i);
  for (std::size_t k = 0; k < n; ++k)
    if (!s(i, k).is_zero()) s(j, k) += f * s(i, k);
  for (std::size_t k = 0; k < t.rows(); ++k)
    if (!t(k, i).is_zero()) t(k, j) += f * t(k, i);
}

void swap_basis(QMatrix& s, QMatrix& t, std::size_t i, std::size_t j) {
  for (std::size_t k = 0; k < s.rows(); ++k) std::swap(s(k, i), s(k, j));
  for (std::size_t k = 0; k < s.rows(); ++k) std::swap(s(i, k), s(j, k));
  for (std::size_t k = 0; k < t.rows(); ++k) std::swap(t(k, i), t(k, j));
}

}  // namespace

Diagonalization congruence_diagonalize(const QMatrix& a) {
  if (!is_symmetric(a)) throw std::invalid_argument("congruence_diagonalize: not symmetric");
  const std::size_t n = a.rows();
  QMatrix s = a;
  QMatrix t = QMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (s(i, i).is_zero()) {
      std::size_t j = i + 1;
      while (j < n && s(j, j).is_zero()) ++j;
      if (j < n) {
        swap_basis(s, t, i, j);
      } else {
        // all remaining diagonal entries vanish: split a hyperbolic pair
        j = i + 1;
        while (j < n && s(i, j).is_zero()) ++j;
        if (j == n) continue;
        add_multiple(s, t, i, j, QuadScalar(1));
      }
    }
    const QuadScalar inv = s(i, i).inverse();
    for (std::size_t j = i + 1; j < n; ++j)
      if (!s(i, j).is_zero()) add_multiple(s, t, j, i, -(s(i, j) * inv));
  }
  Diagonalization out{std::move(t), {}};
  for (std::size_t i = 0; i < n; ++i) out.values.push_back(s(i, i));
  return out;
}

Signature signature(const QMatrix& a) {
  Signature sig;
  for (const auto& v : congruence_diagonalize(a).values) {
    if (v.sign() > 0) ++sig.p;
    if (v.sign() < 0) ++sig.q;
  }
  return sig;
}

QMatrix kernel_basis(const LinearMap& m) {
  if (rank(m.rows()) != m.s())
    throw HypothesisError("rank_M", "linear map has rank below s = " + std::to_string(m.s()));
  return null_space(m.rows());
}

QuadraticForm restrict(const QuadraticForm& q, const QMatrix& basis) {
  if (basis.rows() != q.dim()) throw DimensionError("restrict: basis has wrong length");
  if (rank(basis) != basis.cols()) throw std::invalid_argument("restrict: dependent basis");
  return QuadraticForm(basis.transpose() * q.gram() * basis);
}

RatMatrix rational_row_span(const QMatrix& kernel) {
  // c K = 0 with c rational  <=>  c K_A = 0 and c K_B = 0, K = K_A + sqrt(D) K_B
  const std::size_t d = kernel.rows(), k = kernel.cols();
  RatMatrix stacked(2 * k, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      stacked(j, i) = kernel(i, j).a();
      stacked(k + j, i) = kernel(i, j).b();
    }
  return null_space(stacked);
}

ConditionReport check_conditions(const QuadraticForm& q, const LinearMap& m, bool float_entries) {
  if (q.dim() != m.dim())
    throw DimensionError("Q has dimension " + std::to_string(q.dim()) + " but M has " +
                         std::to_string(m.dim()) + " columns");
  ConditionReport r;
  r.d = q.dim();
  r.s = m.s();
  r.dim_ok = r.d > 2 * r.s;
  r.nondegenerate = signature(q).rank() == static_cast<int>(r.d);
  r.kernel = kernel_basis(m);
  r.restricted_signature = signature(restrict(q, r.kernel));
  r.rank_restricted = r.restricted_signature.rank();
  r.rank_ok = r.rank_restricted > 2;
  r.indefinite_restricted = r.restricted_signature.p >= 1 && r.restricted_signature.q >= 1;
  r.rational_kernel = rational_row_span(r.kernel);
  r.irrationality_decidable = !float_entries;
  r.irrationality_ok = !float_entries && r.rational_kernel.cols() == 0;
  r.overall = r.dim_ok && r.rank_ok && r.indefinite_restricted && r.irrationality_ok;
  return r;
}

}  // namespace qdl
