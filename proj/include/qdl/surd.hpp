#pragma once

// Finite sums  sum_k c_k * sqrt(r_k)  with c_k, r_k in Q(sqrt D), r_k > 0.
// Terms whose radicands differ by a square factor in the field are merged,
// so distinct terms have radicands in distinct square classes and the
// representation of zero is unique.

#include <optional>
#include <ostream>
#include <vector>

#include "qdl/exactnum.hpp"

namespace qdl {

/// coeff * sqrt(root), root > 0.
struct TaggedScalar {
  QuadScalar coeff;
  QuadScalar root{1};

  QuadScalar square() const { return coeff * coeff * root; }
  double to_double() const;
  friend bool operator==(const TaggedScalar& x, const TaggedScalar& y);
};

class SurdSum {
 public:
  struct Term {
    QuadScalar root;
    QuadScalar coeff;
  };

  SurdSum() = default;
  SurdSum(int v) : SurdSum(QuadScalar(v)) {}  // NOLINT
  SurdSum(const QuadScalar& v);               // NOLINT
  SurdSum(const Rational& v) : SurdSum(QuadScalar(v)) {}  // NOLINT
  SurdSum(const TaggedScalar& t);             // NOLINT
  static SurdSum sqrt_of(const QuadScalar& root);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Value if it lies in the base field.
  std::optional<QuadScalar> as_field() const;
  std::optional<TaggedScalar> as_tagged() const;
  double to_double() const;

  SurdSum operator-() const;
  SurdSum& operator+=(const SurdSum& o);
  SurdSum& operator-=(const SurdSum& o) { return *this += -o; }
  SurdSum& operator*=(const SurdSum& o);

  friend SurdSum operator+(SurdSum x, const SurdSum& y) { return x += y; }
  friend SurdSum operator-(SurdSum x, const SurdSum& y) { return x -= y; }
  friend SurdSum operator*(SurdSum x, const SurdSum& y) { return x *= y; }
  friend bool operator==(const SurdSum& x, const SurdSum& y) { return (x - y).is_zero(); }
  friend bool operator!=(const SurdSum& x, const SurdSum& y) { return !(x == y); }
  friend std::ostream& operator<<(std::ostream& os, const SurdSum& x);

 private:
  void add_term(const QuadScalar& root, const QuadScalar& coeff);
  void widen(std::int64_t d);
  std::vector<Term> terms_;
  std::int64_t d_ = 0;  // field in which square classes are merged
};

inline bool is_zero(const SurdSum& x) { return x.is_zero(); }
inline double to_double(const SurdSum& x) { return x.to_double(); }

}  // namespace qdl
