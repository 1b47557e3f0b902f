#include "qdl/exactnum.hpp"

#include <cmath>
#include <sstream>

namespace qdl {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1")
                                                          : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    throw ParseError("malformed rational \"" + std::string(text) + "\"");
  Integer n(std::string(num), 10);
  Integer d(std::string(den), 10);
  if (d == 0) throw ParseError("zero denominator in \"" + std::string(text) + "\"");
  Rational r(negative ? Integer(-n) : n, d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& x) { return x.get_str(10); }

std::optional<Rational> rational_sqrt(const Rational& x) {
  if (sgn(x) < 0) return std::nullopt;
  const Integer& n = x.get_num();
  const Integer& d = x.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t()))
    return std::nullopt;
  Integer rn, rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  return Rational(rn, rd);
}

bool is_squarefree(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % (p * p) == 0) return false;
  }
  return true;
}

QuadScalar::QuadScalar(Rational a, Rational b, std::int64_t radicand)
    : a_(std::move(a)), b_(std::move(b)), d_(radicand) {
  a_.canonicalize();
  b_.canonicalize();
  if (d_ == 0) {
    if (sgn(b_) != 0) throw std::invalid_argument("QuadScalar: b != 0 requires a radicand");
    return;
  }
  if (!is_squarefree(d_))
    throw std::invalid_argument("QuadScalar: radicand " + std::to_string(d_) +
                                " is not squarefree >= 2");
}

std::int64_t QuadScalar::join(std::int64_t d1, std::int64_t d2) {
  if (d1 == 0) return d2;
  if (d2 == 0 || d1 == d2) return d1;
  throw FieldMismatch("cannot combine Q(sqrt " + std::to_string(d1) + ") with Q(sqrt " +
                      std::to_string(d2) + ")");
}

int QuadScalar::sign() const {
  const int sa = sgn(a_);
  const int sb = sgn(b_);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sa == 0 ? sb : sa;
  // opposite signs: compare a^2 with D b^2 (never equal, sqrt D irrational)
  const Rational lhs = a_ * a_;
  const Rational rhs = b_ * b_ * d_;
  return lhs > rhs ? sa : sb;
}

Rational QuadScalar::norm() const { return a_ * a_ - b_ * b_ * d_; }

QuadScalar QuadScalar::inverse() const {
  if (is_zero()) throw std::domain_error("QuadScalar: division by zero");
  const Rational n = norm();
  return QuadScalar(a_ / n, -b_ / n, d_, 0);
}

double QuadScalar::to_double() const {
  if (sgn(b_) == 0) return a_.get_d();
  return a_.get_d() + b_.get_d() * std::sqrt(static_cast<double>(d_));
}

QuadScalar& QuadScalar::operator+=(const QuadScalar& o) {
  d_ = join(d_, o.d_);
  a_ += o.a_;
  b_ += o.b_;
  return *this;
}

QuadScalar& QuadScalar::operator-=(const QuadScalar& o) {
  d_ = join(d_, o.d_);
  a_ -= o.a_;
  b_ -= o.b_;
  return *this;
}

QuadScalar& QuadScalar::operator*=(const QuadScalar& o) {
  d_ = join(d_, o.d_);
  if (sgn(b_) == 0 && sgn(o.b_) == 0) {
    a_ *= o.a_;
    return *this;
  }
  Rational na = a_ * o.a_ + b_ * o.b_ * d_;
  Rational nb = a_ * o.b_ + b_ * o.a_;
  a_ = std::move(na);
  b_ = std::move(nb);
  return *this;
}

QuadScalar& QuadScalar::operator/=(const QuadScalar& o) {
  join(d_, o.d_);
  if (o.is_rational()) {
    if (sgn(o.a_) == 0) throw std::domain_error("QuadScalar: division by zero");
    d_ = join(d_, o.d_);
    a_ /= o.a_;
    b_ /= o.a_;
    return *this;
  }
  return *this *= o.inverse();
}

std::ostream& operator<<(std::ostream& os, const QuadScalar& x) { return os << to_string(x); }

std::string to_string(const QuadScalar& x) {
  if (x.is_rational()) return to_string(x.a());
  std::ostringstream os;
  os << to_string(x.a()) << (sgn(x.b()) < 0 ? "-" : "+") << to_string(Rational(abs(x.b())))
     << "*sqrt(" << x.radicand() << ")";
  return os.str();
}

std::optional<QuadScalar> field_sqrt(const QuadScalar& x, std::int64_t field) {
  const std::int64_t d = x.radicand() != 0 ? x.radicand() : field;
  if (x.is_zero()) return QuadScalar();
  if (x.sign() < 0) return std::nullopt;
  if (x.is_rational()) {
    if (auto r = rational_sqrt(x.a())) return QuadScalar(*r);
    if (d != 0) {
      // a = D c^2  =>  sqrt(a) = c sqrt(D)
      if (auto c = rational_sqrt(x.a() / d)) return QuadScalar(0, *c, d);
    }
    return std::nullopt;
  }
  // (u + v sqrt D)^2 = u^2 + D v^2 + 2uv sqrt D
  const auto n = rational_sqrt(x.norm());
  if (!n) return std::nullopt;
  for (const Rational& u2 : {Rational((x.a() + *n) / 2), Rational((x.a() - *n) / 2)}) {
    if (sgn(u2) <= 0) continue;
    auto u = rational_sqrt(u2);
    if (!u) continue;
    QuadScalar cand(*u, x.b() / (2 * *u), d);
    if (cand * cand == x) return cand.sign() < 0 ? -cand : cand;
  }
  return std::nullopt;
}

}  // namespace qdl
