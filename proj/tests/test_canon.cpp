#include <random>

#include "doctest.h"
#include "qdl/canon.hpp"

using namespace qdl;

namespace {

QMatrix diag(std::vector<long> v) {
  QMatrix m(v.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i) m(i, i) = v[i];
  return m;
}

const QuadScalar kR2 = QuadScalar::root(2);

void check_param_law(const QuadraticForm& q, const LinearMap& m, const CanonicalParams& p) {
  const int d = static_cast<int>(q.dim()), s = static_cast<int>(m.s());
  const int rk = signature(restrict(q, kernel_basis(m))).rank();
  CHECK(p.m == d - s - rk);
  const Signature sig = signature(q);
  CHECK(sig.p == p.p1 + p.m + p.r);
  CHECK(sig.q == p.q1 + p.m + p.n);
  CHECK(signature(p.middle) == Signature{p.p1, p.q1});
}

}  // namespace

TEST_CASE("reduce_single cases") {
  {
    const QuadraticForm q(diag({1, 1, -1}));
    const auto r = reduce_single(q, LinearMap(QMatrix{{1, 0, 0}}));
    CHECK(r.tag == SingleCase::c1a);
    CHECK(r.cert.g_d == ScaledMatrix::identity(3));
    CHECK(verify_certificate(q, LinearMap(QMatrix{{1, 0, 0}}), r.cert));
  }
  {
    const QuadraticForm q(diag({1, 1, -1}));
    const LinearMap l(QMatrix{{1, 0, 1}});
    const auto r = reduce_single(q, l);
    CHECK(r.tag == SingleCase::c2);
    CHECK(canonical_gram(r.cert.params) == QMatrix{{0, 0, 1}, {0, 1, 0}, {1, 0, 0}});
    CHECK(verify_certificate(q, l, r.cert));
  }
  {
    const QuadraticForm q(diag({1, -1}));
    const LinearMap l(QMatrix{{0, 1}});
    const auto r = reduce_single(q, l);
    CHECK(r.tag == SingleCase::c1b);
    CHECK(r.cert.layout == Layout::single_1b);
    CHECK(verify_certificate(q, l, r.cert));
  }
  CHECK_THROWS_AS(reduce_single(QuadraticForm(diag({1, 0})), LinearMap(QMatrix{{1, 0}})), HypothesisError);
  CHECK_THROWS_AS(reduce_single(QuadraticForm(diag({1, -1})), LinearMap(QMatrix{{0, 0}})), HypothesisError);
}

TEST_CASE("reduce_single case tag matches restricted rank") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> u(-3, 3);
  int done = 0;
  while (done < 100) {
    const int d = 2 + done % 4;
    QMatrix a(d, d), l(1, d);
    for (int i = 0; i < d; ++i) {
      l(0, i) = u(rng);
      for (int j = i; j < d; ++j) a(i, j) = a(j, i) = u(rng);
    }
    const QuadraticForm q(a);
    if (signature(q).rank() != d || l.is_zero()) continue;
    ++done;
    const auto r = reduce_single(q, LinearMap(l));
    const int rk = signature(restrict(q, kernel_basis(LinearMap(l)))).rank();
    CHECK(rk == (r.tag == SingleCase::c2 ? d - 2 : d - 1));
    CHECK(verify_certificate(q, LinearMap(l), r.cert));
  }
}

TEST_CASE("reduce_pair fixed point and examples") {
  CanonicalParams p;
  p.m = 1;
  p.p1 = 1;
  p.q1 = 0;
  p.r = 1;
  p.n = 2;
  p.middle = QMatrix{{1}};
  const QuadraticForm q0(canonical_gram(p));
  const LinearMap m0(canonical_map(p));
  const auto c = reduce_pair(q0, m0);
  CHECK(c.g_d == ScaledMatrix::identity(p.d()));
  CHECK(c.g_s == ScaledMatrix::identity(p.s()));
  CHECK(c.params.m == 1);
  CHECK(c.params.r == 1);
  CHECK(c.params.n == 2);
  CHECK(verify_certificate(q0, m0, c));

  const QuadraticForm q5(diag({1, 1, 1, -1, -1}));
  const LinearMap irr(QMatrix{{1, kR2, 0, 0, 0}});
  const auto c5 = reduce_pair(q5, irr);
  CHECK(c5.params.m == 0);
  CHECK(c5.params.r + c5.params.p1 == 3);
  CHECK(c5.params.n + c5.params.q1 == 2);
  CHECK(verify_certificate(q5, irr, c5));
  check_param_law(q5, irr, c5.params);

  const QuadraticForm q4(QMatrix{{0, 0, 0, 1}, {0, 1, 0, 0}, {0, 0, -1, 0}, {1, 0, 0, 0}});
  const LinearMap x1(QMatrix{{1, 0, 0, 0}});
  const auto c4 = reduce_pair(q4, x1);
  CHECK(c4.params.m == 1);
  CHECK(c4.params.r == 1);
  CHECK(c4.params.n == 1);
  CHECK(c4.params.p1 == 0);
  CHECK(c4.params.q1 == 0);
  CHECK(verify_certificate(q4, x1, c4));

  // hand-built certificate for the same pair: the identity
  CanonicalCertificate hand;
  hand.g_d = ScaledMatrix::identity(4);
  hand.g_s = ScaledMatrix::identity(1);
  hand.params = c4.params;
  CHECK(verify_certificate(q4, x1, hand));
}

TEST_CASE("verify_certificate rejects perturbations") {
  const QuadraticForm q5(diag({1, 1, 1, -1, -1}));
  const LinearMap irr(QMatrix{{1, kR2, 0, 0, 0}});
  auto c = reduce_pair(q5, irr);
  REQUIRE(verify_certificate(q5, irr, c));
  QMatrix core = c.g_d.core();
  core(1, 2) += QuadScalar(Rational(1, 7));
  CanonicalCertificate bad = c;
  bad.g_d = ScaledMatrix(c.g_d.left_roots(), core, c.g_d.right_roots());
  CHECK_FALSE(verify_certificate(q5, irr, bad));
  bad = c;
  bad.g_s = ScaledMatrix(c.g_s.core() * QuadScalar(2));
  CHECK_FALSE(verify_certificate(q5, irr, bad));
}

TEST_CASE("reduce_pair hypothesis errors") {
  const QuadraticForm q(diag({1, 1, 1, -1}));
  try {
    reduce_pair(q, LinearMap(QMatrix{{0, 0, 0, 1}}));
    FAIL("expected HypothesisError");
  } catch (const HypothesisError& e) {
    CHECK(e.condition() == "indefinite_restricted");
  }
  CHECK_THROWS_AS(reduce_pair(q, LinearMap(QMatrix{{1, 0, 0, 0}, {2, 0, 0, 0}})), HypothesisError);
}

TEST_CASE("random round trip with irrational maps") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> u(-5, 5);
  int done = 0;
  while (done < 60) {
    const int d = 4 + done % 5, s = 1 + done % 3;
    if (d <= s + 1) continue;
    QMatrix a(d, d), m(s, d);
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) a(i, j) = a(j, i) = u(rng);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = QuadScalar(u(rng), u(rng) % 2, 2);
    const QuadraticForm q(a);
    const LinearMap lm(m);
    if (signature(q).rank() != d || rank(m) != static_cast<std::size_t>(s)) continue;
    const Signature rs = signature(restrict(q, kernel_basis(lm)));
    if (rs.p < 1 || rs.q < 1) continue;
    ++done;
    const auto c = reduce_pair(q, lm);
    CHECK(verify_certificate(q, lm, c));
    check_param_law(q, lm, c.params);
  }
}
