#include <random>

#include "doctest.h"
#include "qdl/errors.hpp"
#include "qdl/latpoints.hpp"

using namespace qdl;

namespace {

QMatrix gram(std::vector<std::vector<long>> rows) {
  QMatrix m(rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  return m;
}

QMatrix diag(std::vector<long> v) {
  QMatrix m(v.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i) m(i, i) = v[i];
  return m;
}

// Naive oracle: scan the whole box.
std::vector<IntVector> naive(const IntegralForm& f, std::int64_t H) {
  std::vector<IntVector> out;
  IntVector x(f.d, -H);
  for (;;) {
    if (f.on_level(x)) out.push_back(x);
    std::size_t k = f.d;
    while (k > 0 && x[k - 1] == H) x[--k] = -H;
    if (k == 0) break;
    ++x[k - 1];
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("difference of squares") {
  const auto f = integral_form(diag({1, -1}), 0);
  const auto ps = enumerate_box(f, 3);
  CHECK(ps.exhaustive);
  CHECK(ps.points.size() == 13);
  for (const auto& x : ps.points) CHECK((x[0] == x[1] || x[0] == -x[1]));
}

TEST_CASE("pythagorean triples") {
  const auto f = integral_form(diag({1, 1, -1}), 0);
  const auto ps = enumerate_box(f, 5);
  auto has = [&](IntVector v) { return std::binary_search(ps.points.begin(), ps.points.end(), v); };
  CHECK(has({3, 4, 5}));
  CHECK(has({4, 3, 5}));
  CHECK(has({-3, 4, -5}));
  CHECK(has({4, -3, 5}));
  CHECK(ps.points == naive(f, 5));
}

TEST_CASE("five variables against the naive scan") {
  const auto f = integral_form(diag({1, 1, 1, -1, -1}), 0);
  CHECK(enumerate_box(f, 10).points == naive(f, 10));
}

TEST_CASE("rational scaling and levels") {
  QMatrix g = diag({1, 1, -1});
  g(0, 1) = g(1, 0) = Rational(1, 2);
  const auto f = integral_form(g, Rational(3, 2));
  CHECK(f.target == 3);
  CHECK(f.at(0, 1) == 1);
  CHECK(enumerate_box(f, 6).points == naive(f, 6));
  QMatrix irr = diag({1, 1});
  irr(0, 0) = QuadScalar::root(2);
  CHECK_THROWS_AS(integral_form(irr, 0), FieldMismatch);
}

TEST_CASE("random integral forms agree with the naive scan") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> coef(-4, 4), dim(2, 4), height(1, 8), level(-6, 6);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = dim(rng);
    QMatrix g(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) g(i, j) = g(j, i) = coef(rng);
    const auto f = integral_form(g, level(rng));
    const int H = d == 4 ? height(rng) : height(rng) + 4;
    const auto ps = enumerate_box(f, H, default_node_budget(), 2);
    CHECK(ps.exhaustive);
    CHECK(ps.points == naive(f, H));
  }
}

TEST_CASE("monotone in H and budget cut") {
  const auto f = integral_form(diag({1, 1, 1, -1, -1}), 0);
  const auto small = enumerate_box(f, 4), large = enumerate_box(f, 7);
  CHECK(std::includes(large.points.begin(), large.points.end(), small.points.begin(), small.points.end()));
  const auto cut = enumerate_box(f, 7, 200);
  CHECK_FALSE(cut.exhaustive);
  CHECK(std::includes(large.points.begin(), large.points.end(), cut.points.begin(), cut.points.end()));
}

TEST_CASE("automorphs") {
  const auto f = integral_form(diag({1, 1, -1}), 0);
  CHECK(is_automorph(f, {1, 2, 2, 2, 1, 2, 2, 2, 3}));
  CHECK_FALSE(is_automorph(f, {1, 2, 2, 2, 1, 2, 2, 2, 2}));
  const auto autos = find_automorphs(f, 64);
  bool swap = false;
  int flips = 0;
  for (const auto& a : autos) {
    CHECK(is_automorph(f, a.gamma));
    if (a.gamma == std::vector<std::int64_t>{0, 1, 0, 1, 0, 0, 0, 0, 1}) swap = true;
    if (a.kind == "signed_permutation" && a.gamma[0] * a.gamma[4] * a.gamma[8] == -1) ++flips;
  }
  CHECK(swap);
  CHECK(flips == 3);

  // 2 x1 x2: no transvections, only trivial symmetries
  const auto h = integral_form(gram({{0, 1}, {1, 0}}), 0);
  for (const auto& a : find_automorphs(h, 64)) {
    CHECK(a.kind != "transvection");
    CHECK(is_automorph(h, a.gamma));
  }
}

TEST_CASE("orbit expansion") {
  const auto f = integral_form(diag({1, 1, -1}), 0);
  PointSet seed;
  seed.points = {{3, 4, 5}};
  CHECK(orbit_expand(f, seed, {}, 10, 100).points == seed.points);
  CHECK(orbit_expand(f, seed, {}, 4, 100).points.empty());

  const auto autos = find_automorphs(f, 64);
  const auto orbit = orbit_expand(f, seed, autos, 30, 5000);
  CHECK(orbit.points.size() > 10);
  for (const auto& x : orbit.points) CHECK(f.on_level(x));
  const auto box = enumerate_box(f, 30);
  CHECK(std::includes(box.points.begin(), box.points.end(), orbit.points.begin(), orbit.points.end()));
  bool bigger = false;
  for (const auto& x : orbit.points) bigger |= sup_norm(x) > 5;
  CHECK(bigger);
}
