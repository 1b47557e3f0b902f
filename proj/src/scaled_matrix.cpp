#include "qdl/scaled_matrix.hpp"

#include <cmath>

namespace qdl {

namespace {

std::int64_t join(std::int64_t d, std::int64_t e) {
  if (d == 0) return e;
  if (e == 0 || e == d) return d;
  throw FieldMismatch("entries from different quadratic fields");
}

std::int64_t field_of(const std::vector<QuadScalar>& v, std::int64_t d) {
  for (const auto& x : v) d = join(d, x.radicand());
  return d;
}

bool all_one(const std::vector<QuadScalar>& v) {
  for (const auto& x : v)
    if (!(x == QuadScalar(1))) return false;
  return true;
}

}  // namespace

std::int64_t field_of(const QMatrix& m, std::int64_t d) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) d = join(d, m(i, j).radicand());
  return d;
}

ScaledMatrix::ScaledMatrix(QMatrix core)
    : left_(core.rows(), QuadScalar(1)), core_(std::move(core)), right_(core_.cols(), QuadScalar(1)) {}

ScaledMatrix::ScaledMatrix(std::vector<QuadScalar> left_roots, QMatrix core,
                           std::vector<QuadScalar> right_roots)
    : left_(std::move(left_roots)), core_(std::move(core)), right_(std::move(right_roots)) {
  if (left_.size() != core_.rows() || right_.size() != core_.cols())
    throw DimensionError("ScaledMatrix: root count does not match core " + core_.shape());
  for (const auto* v : {&left_, &right_})
    for (const auto& x : *v)
      if (x.sign() <= 0) throw std::invalid_argument("ScaledMatrix: roots must be positive");
  normalize();
}

void ScaledMatrix::normalize() {
  const std::int64_t d = field_of(right_, field_of(left_, field_of(core_)));
  for (std::size_t i = 0; i < left_.size(); ++i) {
    if (left_[i] == QuadScalar(1)) continue;
    if (auto f = field_sqrt(left_[i], d)) {
      for (std::size_t j = 0; j < core_.cols(); ++j) core_(i, j) *= *f;
      left_[i] = QuadScalar(1);
    }
  }
  for (std::size_t j = 0; j < right_.size(); ++j) {
    if (right_[j] == QuadScalar(1)) continue;
    if (auto f = field_sqrt(right_[j], d)) {
      for (std::size_t i = 0; i < core_.rows(); ++i) core_(i, j) *= *f;
      right_[j] = QuadScalar(1);
    }
  }
}

TaggedScalar ScaledMatrix::entry(std::size_t i, std::size_t j) const {
  return {core_(i, j), left_[i] * right_[j]};
}

Matrix<SurdSum> ScaledMatrix::expand() const {
  Matrix<SurdSum> out(rows(), cols());
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < cols(); ++j)
      if (!core_(i, j).is_zero()) out(i, j) = SurdSum(entry(i, j));
  return out;
}

std::optional<QMatrix> ScaledMatrix::as_field() const {
  if (all_one(left_) && all_one(right_)) return core_;
  return std::nullopt;
}

Matrix<double> ScaledMatrix::to_double() const {
  Matrix<double> out(rows(), cols());
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < cols(); ++j) out(i, j) = entry(i, j).to_double();
  return out;
}

ScaledMatrix ScaledMatrix::transpose() const { return {right_, core_.transpose(), left_}; }

ScaledMatrix ScaledMatrix::inverse() const {
  auto inv = [](std::vector<QuadScalar> v) {
    for (auto& x : v) x = x.inverse();
    return v;
  };
  return {inv(right_), qdl::inverse(core_), inv(left_)};
}

ScaledMatrix operator*(const ScaledMatrix& a, const ScaledMatrix& b) {
  if (a.cols() != b.rows())
    throw DimensionError("ScaledMatrix product " + a.core_.shape() + " * " + b.core_.shape());
  const std::int64_t d = field_of(b.core_, field_of(a.core_)) ;
  QMatrix mid = b.core_;
  for (std::size_t k = 0; k < a.cols(); ++k) {
    const QuadScalar prod = a.right_[k] * b.left_[k];
    if (prod == QuadScalar(1)) continue;
    auto f = field_sqrt(prod, field_of(std::vector<QuadScalar>{prod}, d));
    if (!f) throw NotRepresentable("ScaledMatrix product leaves sqrt(" + to_string(prod) + ")");
    for (std::size_t j = 0; j < mid.cols(); ++j) mid(k, j) *= *f;
  }
  return {a.left_, a.core_ * mid, b.right_};
}

bool operator==(const ScaledMatrix& a, const ScaledMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if (a.left_ == b.left_ && a.right_ == b.right_) return a.core_ == b.core_;
  return a.expand() == b.expand();
}

std::vector<SurdSum> scaled_apply(const ScaledMatrix& m, const std::vector<QuadScalar>& v) {
  if (v.size() != m.cols())
    throw DimensionError("scaled_apply: vector of length " + std::to_string(v.size()) +
                         " for " + m.core().shape());
  std::vector<SurdSum> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m.core()(i, j).is_zero() || v[j].is_zero()) continue;
      const TaggedScalar e = m.entry(i, j);
      out[i] += SurdSum(TaggedScalar{e.coeff * v[j], e.root});
    }
  return out;
}

bool congruence_check(const QMatrix& a, const ScaledMatrix& g, const QMatrix& b) {
  if (!a.square() || !b.square() || g.rows() != b.rows() || g.cols() != a.rows())
    throw DimensionError("congruence_check: shapes " + a.shape() + ", " + g.core().shape() +
                         ", " + b.shape());
  if (auto plain = g.as_field()) return plain->transpose() * b * *plain == a;
  // (G^T B G)_ij = sqrt(r_i r_j) * sum_kl C_ki C_lj B_kl sqrt(l_k l_l)
  const std::size_t n = a.rows();
  const auto& c = g.core();
  const auto& l = g.left_roots();
  const auto& r = g.right_roots();
  // group (k, l) pairs by the class of l_k l_l; inner sums stay in the field
  Matrix<SurdSum> bs(b.rows(), b.cols());
  for (std::size_t k = 0; k < b.rows(); ++k)
    for (std::size_t m = 0; m < b.cols(); ++m)
      if (!b(k, m).is_zero()) bs(k, m) = SurdSum(TaggedScalar{b(k, m), l[k] * l[m]});
  const Matrix<SurdSum> cs = c.map([](const QuadScalar& x) { return SurdSum(x); });
  const Matrix<SurdSum> inner = cs.transpose() * bs * cs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      SurdSum lhs = inner(i, j);
      if (!lhs.is_zero()) lhs *= SurdSum::sqrt_of(r[i] * r[j]);
      if (lhs != SurdSum(a(i, j))) return false;
    }
  return true;
}

}  // namespace qdl
