#pragma once

// Exact scalars: arbitrary-precision rationals and elements a + b*sqrt(D) of
// a single real quadratic field.  No floating point is used for any
// comparison; to_double() is a one-way mirror for plotting and the density
// experiment.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "qdl/errors.hpp"

namespace qdl {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "p", "-p" or "p/q".  Throws ParseError on malformed text or q = 0.
Rational parse_rational(std::string_view text);

/// Canonical text: "p" when the denominator is 1, otherwise "p/q".
std::string to_string(const Rational& x);

inline bool is_zero(const Rational& x) { return sgn(x) == 0; }
inline int sign(const Rational& x) { return sgn(x); }
inline double to_double(const Rational& x) { return x.get_d(); }

/// Exact square root of a non-negative rational, if it is rational.
std::optional<Rational> rational_sqrt(const Rational& x);

bool is_squarefree(std::int64_t n);

/// a + b*sqrt(D).  D = 0 marks a plain rational (then b = 0); otherwise D is
/// squarefree and >= 2.  Values with D = 0 combine with any field; two
/// values carrying different non-zero D throw FieldMismatch.
class QuadScalar {
 public:
  QuadScalar() = default;
  QuadScalar(long v) : a_(v) {}  // NOLINT(google-explicit-constructor)
  QuadScalar(int v) : a_(v) {}   // NOLINT(google-explicit-constructor)
  QuadScalar(Rational a) : a_(std::move(a)) { a_.canonicalize(); }  // NOLINT
  QuadScalar(Rational a, Rational b, std::int64_t radicand);

  /// sqrt(D) itself.
  static QuadScalar root(std::int64_t radicand) { return {0, 1, radicand}; }

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  /// 0 when the value is known to be rational.
  std::int64_t radicand() const { return d_; }

  bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }
  bool is_rational() const { return sgn(b_) == 0; }
  /// Exact sign of the real number a + b*sqrt(D).
  int sign() const;
  /// a^2 - D b^2.
  Rational norm() const;
  QuadScalar conjugate() const { return {a_, -b_, d_}; }
  QuadScalar inverse() const;
  double to_double() const;

  QuadScalar operator-() const { return {-a_, -b_, d_}; }
  QuadScalar& operator+=(const QuadScalar& o);
  QuadScalar& operator-=(const QuadScalar& o);
  QuadScalar& operator*=(const QuadScalar& o);
  QuadScalar& operator/=(const QuadScalar& o);

  friend QuadScalar operator+(QuadScalar x, const QuadScalar& y) { return x += y; }
  friend QuadScalar operator-(QuadScalar x, const QuadScalar& y) { return x -= y; }
  friend QuadScalar operator*(QuadScalar x, const QuadScalar& y) { return x *= y; }
  friend QuadScalar operator/(QuadScalar x, const QuadScalar& y) { return x /= y; }

  friend bool operator==(const QuadScalar& x, const QuadScalar& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && (sgn(x.b_) == 0 || x.d_ == y.d_);
  }
  friend bool operator<(const QuadScalar& x, const QuadScalar& y) {
    return (x - y).sign() < 0;
  }
  friend bool operator>(const QuadScalar& x, const QuadScalar& y) { return y < x; }

  friend std::ostream& operator<<(std::ostream& os, const QuadScalar& x);

 private:
  QuadScalar(Rational a, Rational b, std::int64_t d, int /*unchecked*/)
      : a_(std::move(a)), b_(std::move(b)), d_(d) {}
  static std::int64_t join(std::int64_t d1, std::int64_t d2);

  Rational a_{0};
  Rational b_{0};
  std::int64_t d_ = 0;
};

inline bool is_zero(const QuadScalar& x) { return x.is_zero(); }
inline int sign(const QuadScalar& x) { return x.sign(); }
inline double to_double(const QuadScalar& x) { return x.to_double(); }
std::string to_string(const QuadScalar& x);

/// Exact square root of x in Q(sqrt D) (D taken from x or from `field` when
/// x is rational).  Returns the positive root, or nullopt when x is negative
/// or not a square in the field.
std::optional<QuadScalar> field_sqrt(const QuadScalar& x, std::int64_t field = 0);

}  // namespace qdl
