#include "qdl/surd.hpp"

#include <cmath>

namespace qdl {

double TaggedScalar::to_double() const { return coeff.to_double() * std::sqrt(root.to_double()); }

bool operator==(const TaggedScalar& x, const TaggedScalar& y) { return SurdSum(x) == SurdSum(y); }

SurdSum::SurdSum(const QuadScalar& v) {
  if (!v.is_zero()) terms_.push_back({QuadScalar(1), v});
  d_ = v.radicand();
}

SurdSum::SurdSum(const TaggedScalar& t) { add_term(t.root, t.coeff); }

SurdSum SurdSum::sqrt_of(const QuadScalar& root) {
  SurdSum s;
  s.add_term(root, QuadScalar(1));
  return s;
}

void SurdSum::widen(std::int64_t d) {
  if (d == 0 || d == d_) return;
  if (d_ != 0) throw FieldMismatch("SurdSum: mixed quadratic fields");
  d_ = d;
  // classes may merge once sqrt(D) is available
  auto old = std::move(terms_);
  terms_.clear();
  for (const auto& t : old) add_term(t.root, t.coeff);
}

void SurdSum::add_term(const QuadScalar& root, const QuadScalar& coeff) {
  if (coeff.is_zero()) return;
  if (root.sign() <= 0) throw std::domain_error("SurdSum: radicand must be positive");
  widen(root.radicand());
  widen(coeff.radicand());
  for (auto it = terms_.begin(); it != terms_.end(); ++it) {
    const QuadScalar ratio = root / it->root;
    // sqrt(root) = sqrt(ratio) * sqrt(it->root)
    if (auto f = field_sqrt(ratio, d_)) {
      it->coeff += coeff * *f;
      if (it->coeff.is_zero()) terms_.erase(it);
      return;
    }
  }
  // keep the rational class first so field values stay cheap to read back
  if (auto f = field_sqrt(root, d_)) {
    terms_.insert(terms_.begin(), {QuadScalar(1), coeff * *f});
    return;
  }
  terms_.push_back({root, coeff});
}

std::optional<QuadScalar> SurdSum::as_field() const {
  if (terms_.empty()) return QuadScalar();
  if (terms_.size() == 1 && terms_[0].root == QuadScalar(1)) return terms_[0].coeff;
  return std::nullopt;
}

std::optional<TaggedScalar> SurdSum::as_tagged() const {
  if (terms_.empty()) return TaggedScalar{};
  if (terms_.size() == 1) return TaggedScalar{terms_[0].coeff, terms_[0].root};
  return std::nullopt;
}

double SurdSum::to_double() const {
  double v = 0;
  for (const auto& t : terms_) v += t.coeff.to_double() * std::sqrt(t.root.to_double());
  return v;
}

SurdSum SurdSum::operator-() const {
  SurdSum r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

SurdSum& SurdSum::operator+=(const SurdSum& o) {
  for (const auto& t : o.terms_) add_term(t.root, t.coeff);
  return *this;
}

SurdSum& SurdSum::operator*=(const SurdSum& o) {
  SurdSum out;
  out.widen(d_);
  out.widen(o.d_);
  for (const auto& x : terms_)
    for (const auto& y : o.terms_) out.add_term(x.root * y.root, x.coeff * y.coeff);
  *this = std::move(out);
  return *this;
}

std::ostream& operator<<(std::ostream& os, const SurdSum& x) {
  if (x.terms_.empty()) return os << "0";
  bool first = true;
  for (const auto& t : x.terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << to_string(t.coeff) << ")";
    if (!(t.root == QuadScalar(1))) os << "*sqrt(" << to_string(t.root) << ")";
  }
  return os;
}

}  // namespace qdl
