#include "qdl/symalg.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <set>
#include <sstream>

#include "qdl/errors.hpp"
#include "qdl/quadforms.hpp"

namespace qdl {

namespace {

using std::size_t;

// Offset and size of block b in {0, 1, 2, 3}.
size_t off(const GroupParams& p, int b) {
  const size_t sizes[4] = {size_t(p.l()), size_t(p.tau()), size_t(p.sigma()), size_t(p.l())};
  size_t o = 0;
  for (int k = 0; k < b; ++k) o += sizes[k];
  return o;
}

size_t len(const GroupParams& p, int b) {
  return (b == 0 || b == 3) ? p.l() : b == 1 ? p.tau() : p.sigma();
}

RatMatrix blk(const GroupParams& p, const RatMatrix& f, int i, int j) {
  return f.block(off(p, i), off(p, j), len(p, i), len(p, j));
}

void put(const GroupParams& p, RatMatrix& f, int i, int j, const RatMatrix& b) {
  if (b.rows() == 0 || b.cols() == 0) return;
  f.set_block(off(p, i), off(p, j), b);
}

RatMatrix Jt(const GroupParams& p) { return signature_matrix(p.tau1(), p.tau2()); }
RatMatrix Js(const GroupParams& p) { return signature_matrix(p.sigma1(), p.sigma2()); }

RatMatrix unit(size_t r, size_t c, size_t i, size_t j) {
  RatMatrix e(r, c);
  e(i, j) = 1;
  return e;
}

// Basis X_ab = J_bb E_ab - J_aa E_ba of so(J).
std::vector<RatMatrix> so_basis(const RatMatrix& j) {
  std::vector<RatMatrix> out;
  const size_t n = j.rows();
  for (size_t a = 0; a < n; ++a)
    for (size_t b = a + 1; b < n; ++b) {
      RatMatrix x(n, n);
      x(a, b) = j(b, b);
      x(b, a) = -j(a, a);
      out.push_back(std::move(x));
    }
  return out;
}

std::pair<int, int> defining_block(Sub s) {
  switch (s) {
    case Sub::v_plus: return {1, 3};
    case Sub::v_minus: return {1, 0};
    case Sub::v: return {1, 2};
    case Sub::a: return {1, 1};
    case Sub::d: return {2, 2};
    case Sub::c: return {0, 0};
    case Sub::u_minus: return {3, 2};
    case Sub::u_plus: return {0, 2};
    case Sub::b_plus: return {0, 3};
    case Sub::b_minus: return {3, 0};
  }
  return {0, 0};
}

Rational rand_q(std::mt19937_64& rng, int lo = -3, int hi = 3) {
  std::uniform_int_distribution<int> num(lo, hi), den(1, 3);
  Rational x(num(rng), den(rng));
  x.canonicalize();
  return x;
}

Rational rand_nonzero(std::mt19937_64& rng) {
  for (;;) {
    Rational x = rand_q(rng);
    if (sgn(x) != 0) return x;
  }
}

RatMatrix rand_matrix(std::mt19937_64& rng, size_t r, size_t c) {
  RatMatrix m(r, c);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j) m(i, j) = rand_q(rng);
  return m;
}

RatMatrix embed_sigma(const GroupParams& p, const RatMatrix& h) {
  RatMatrix g = RatMatrix::identity(p.d());
  put(p, g, 2, 2, h);
  return g;
}

// Plane rotation or boost acting on coordinates (a, b) of an n-dimensional space.
RatMatrix plane(size_t n, size_t a, size_t b, const Rational& c, const Rational& s, bool boost) {
  RatMatrix h = RatMatrix::identity(n);
  h(a, a) = c;
  h(b, b) = c;
  h(a, b) = boost ? s : -s;
  h(b, a) = s;
  return h;
}

RatMatrix rotation(size_t n, size_t a, size_t b, const Rational& t) {
  const Rational den = 1 + t * t;
  return plane(n, a, b, (1 - t * t) / den, 2 * t / den, false);
}

RatMatrix boost(size_t n, size_t a, size_t b, const Rational& t) {
  const Rational den = 1 - t * t;
  if (sgn(den) <= 0) throw std::invalid_argument("boost parameter must satisfy |t| < 1");
  return plane(n, a, b, (1 + t * t) / den, 2 * t / den, true);
}

// exp(tN) with N = e f^T J - f e^T J, e = e_a + e_b isotropic, f = e_c.
RatMatrix shear(const RatMatrix& j, size_t a, size_t b, size_t c, const Rational& t) {
  const size_t n = j.rows();
  RatMatrix e(n, 1), f(n, 1);
  e(a, 0) = 1;
  e(b, 0) = 1;
  f(c, 0) = 1;
  RatMatrix x = e * f.transpose() * j - f * e.transpose() * j;
  return exp_nilpotent(x * t);
}

QMatrix q_of(const RatMatrix& m) { return convert<QuadScalar>(m); }

std::string brief(const RatMatrix& m) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < m.rows(); ++i) {
    os << (i ? "; " : "");
    for (size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j).get_str();
  }
  os << "]";
  return os.str();
}

// Row-wise description of a map: for each row a root and (column, coefficient) pairs.
struct RowSpec {
  Rational root = 1;
  std::vector<std::pair<size_t, Rational>> terms;
};

ScaledMatrix from_rows(const std::vector<RowSpec>& rows) {
  const size_t d = rows.size();
  QMatrix core(d, d);
  std::vector<QuadScalar> left(d, QuadScalar(1)), right(d, QuadScalar(1));
  for (size_t i = 0; i < d; ++i) {
    left[i] = QuadScalar(rows[i].root);
    for (const auto& [c, v] : rows[i].terms) core(i, c) += QuadScalar(v);
  }
  return ScaledMatrix(left, core, right);
}

std::vector<RowSpec> identity_rows(size_t d) {
  std::vector<RowSpec> rows(d);
  for (size_t i = 0; i < d; ++i) rows[i].terms = {{i, Rational(1)}};
  return rows;
}

void require(bool ok, const char* cond, const std::string& what) {
  if (!ok) throw HypothesisError(cond, what);
}

}  // namespace

// ---- parameters -----------------------------------------------------------

bool GroupParams::valid() const {
  if (p1 < 0 || q1 < 0 || m < 0 || r < 0 || n < 0) return false;
  if (i1 < 0 || i1 > p1 || i2 < 0 || i2 > q1) return false;
  if (i3 > m || i3 < -std::min(p1, q1)) return false;
  return sigma1() >= 0 && sigma2() >= 0;
}

GroupParams GroupParams::shifted(int d1, int d2, int d3) const {
  GroupParams q = *this;
  q.i1 += d1;
  q.i2 += d2;
  q.i3 += d3;
  return q;
}

std::string GroupParams::str() const {
  std::ostringstream os;
  os << "p'=" << p1 << " q'=" << q1 << " m=" << m << " r=" << r << " n=" << n << " i=(" << i1 << ","
     << i2 << "," << i3 << ")";
  return os.str();
}

RatMatrix signature_matrix(int a, int b) {
  RatMatrix j(a + b, a + b);
  for (int k = 0; k < a + b; ++k) j(k, k) = k < a ? 1 : -1;
  return j;
}

RatMatrix build_Q_prime(const GroupParams& p) {
  if (!p.valid()) throw DimensionError("invalid group parameters " + p.str());
  RatMatrix q(p.d(), p.d());
  put(p, q, 0, 3, RatMatrix::identity(p.l()));
  put(p, q, 3, 0, RatMatrix::identity(p.l()));
  put(p, q, 1, 1, Jt(p));
  put(p, q, 2, 2, Js(p));
  return q;
}

QMatrix build_Q0(const GroupParams& p, const QMatrix& middle) {
  if (p.i1 || p.i2 || p.i3) throw DimensionError("Q0 needs i = 0");
  if (middle.rows() != size_t(p.tau()) || !middle.square())
    throw DimensionError("middle form must be " + std::to_string(p.tau()) + "x" + std::to_string(p.tau()));
  QMatrix q = q_of(build_Q_prime(p));
  if (p.tau()) q.set_block(off(p, 1), off(p, 1), middle);
  return q;
}

// ---- groups ---------------------------------------------------------------

UElement build_U(const GroupParams& p, const RatMatrix& t, const RatMatrix& s) {
  const size_t l = p.l(), sg = p.sigma();
  if (t.rows() != l || t.cols() != sg || s.rows() != l || s.cols() != l)
    throw DimensionError("U parameters must be t: l x sigma, s: l x l");
  const RatMatrix j = Js(p);
  const RatMatrix residual = s + s.transpose() + t * j * t.transpose();
  if (!residual.is_zero())
    throw HypothesisError("U_constraint", "s + s^T + t J t^T = " + brief(residual) + " is not zero");
  RatMatrix g = RatMatrix::identity(p.d());
  put(p, g, 2, 0, -(j * t.transpose()));
  put(p, g, 3, 2, t);
  put(p, g, 3, 0, s);
  return {t, s, g};
}

std::optional<UElement> match_U(const GroupParams& p, const RatMatrix& g) {
  if (g.rows() != size_t(p.d()) || g.cols() != size_t(p.d())) return std::nullopt;
  RatMatrix pattern = g;
  const RatMatrix t = blk(p, g, 3, 2), s = blk(p, g, 3, 0);
  try {
    UElement u = build_U(p, t, s);
    if (u.mat == g) return u;
  } catch (const HypothesisError&) {
  }
  return std::nullopt;
}

UElement random_U(const GroupParams& p, std::mt19937_64& rng) {
  const size_t l = p.l();
  const RatMatrix t = rand_matrix(rng, l, p.sigma());
  const RatMatrix a = rand_matrix(rng, l, l);
  const RatMatrix s = (a - a.transpose() - t * Js(p) * t.transpose()) * Rational(1, 2);
  return build_U(p, t, s);
}

std::vector<GroupElement> build_D_generators(const GroupParams& p, const Rational& t) {
  std::vector<GroupElement> gens;
  const size_t s1 = p.sigma1(), sg = p.sigma();
  const RatMatrix j = Js(p);
  for (size_t a = 0; a + 1 < sg; ++a)
    if ((a + 1 < s1) || a >= s1) gens.push_back({"rotation", embed_sigma(p, rotation(sg, a, a + 1, t))});
  if (s1 >= 1 && sg > s1) {
    const Rational tb = sgn(t) != 0 && abs(t) < 1 ? t : Rational(1, 3);
    for (size_t a = 0; a < s1; ++a) gens.push_back({"boost", embed_sigma(p, boost(sg, a, s1, tb))});
    if (sg >= 3)
      for (size_t c = 0; c < sg; ++c)
        if (c != 0 && c != s1) gens.push_back({"unipotent", embed_sigma(p, shear(j, 0, s1, c, t))});
  }
  return gens;
}

std::vector<GroupElement> build_U_generators(const GroupParams& p) {
  std::vector<GroupElement> gens;
  const size_t l = p.l(), sg = p.sigma();
  const RatMatrix j = Js(p);
  for (size_t a = 0; a < l; ++a)
    for (size_t b = 0; b < sg; ++b) {
      const RatMatrix t = unit(l, sg, a, b);
      gens.push_back({"U", build_U(p, t, t * j * t.transpose() * Rational(-1, 2)).mat});
    }
  for (size_t a = 0; a < l; ++a)
    for (size_t b = a + 1; b < l; ++b)
      gens.push_back({"U", build_U(p, RatMatrix(l, sg), unit(l, l, a, b) - unit(l, l, b, a)).mat});
  return gens;
}

std::vector<GroupElement> build_H_generators(const GroupParams& p) {
  auto gens = build_U_generators(p);
  for (auto& g : build_D_generators(p)) gens.push_back(std::move(g));
  return gens;
}

RatMatrix random_D(const GroupParams& p, std::mt19937_64& rng, int factors) {
  const size_t s1 = p.sigma1(), sg = p.sigma();
  RatMatrix h = RatMatrix::identity(sg);
  if (sg < 2) return embed_sigma(p, h);
  std::uniform_int_distribution<size_t> pick(0, sg - 1);
  std::uniform_int_distribution<int> kind(0, 2);
  for (int f = 0; f < factors; ++f) {
    const Rational t = rand_nonzero(rng);
    const int k = kind(rng);
    const bool mixed = s1 >= 1 && sg > s1;
    if (k == 1 && mixed) {
      std::uniform_int_distribution<size_t> pa(0, s1 - 1), pb(s1, sg - 1);
      Rational tb = t;
      while (abs(tb) >= 1) tb /= 2;
      h = h * boost(sg, pa(rng), pb(rng), tb);
    } else if (k == 2 && mixed && sg >= 3) {
      std::uniform_int_distribution<size_t> pa(0, s1 - 1), pb(s1, sg - 1);
      const size_t a = pa(rng), b = pb(rng);
      size_t c = pick(rng);
      while (c == a || c == b) c = pick(rng);
      h = h * shear(Js(p), a, b, c, t);
    } else {
      // rotation inside one sign block
      std::vector<std::pair<size_t, size_t>> pairs;
      for (size_t a = 0; a + 1 < sg; ++a)
        if (a + 1 < s1 || a >= s1) pairs.emplace_back(a, a + 1);
      if (pairs.empty()) continue;
      std::uniform_int_distribution<size_t> pp(0, pairs.size() - 1);
      const auto [a, b] = pairs[pp(rng)];
      h = h * rotation(sg, a, b, t);
    }
  }
  return embed_sigma(p, h);
}

bool normalizes(const GroupParams& p, const RatMatrix& d, const RatMatrix& u) {
  return match_U(p, d * u * inverse(d)).has_value();
}

RatMatrix exp_nilpotent(const RatMatrix& x) {
  RatMatrix sum = RatMatrix::identity(x.rows());
  RatMatrix term = RatMatrix::identity(x.rows());
  for (size_t k = 1; k <= x.rows() + 1; ++k) {
    term = term * x * Rational(1, long(k));
    if (term.is_zero()) return sum;
    sum += term;
  }
  throw std::domain_error("exp_nilpotent: matrix is not nilpotent");
}

bool preserves(const RatMatrix& g, const RatMatrix& qprime) { return g.transpose() * qprime * g == qprime; }

bool fixes_leading(const RatMatrix& g, int k) {
  for (int i = 0; i < k; ++i)
    for (size_t j = 0; j < g.cols(); ++j)
      if (g(i, j) != (size_t(i) == j ? 1 : 0)) return false;
  return true;
}

// ---- forms ----------------------------------------------------------------

RatMatrix fixed_forms(const std::vector<RatMatrix>& gens, size_t d) {
  RatMatrix stacked;
  for (const auto& g : gens) stacked = vstack(stacked, RatMatrix(g.transpose() - RatMatrix::identity(d)));
  if (stacked.rows() == 0) return RatMatrix::identity(d);
  return null_space(stacked);
}

bool invariance_check(const RatMatrix& basis, const std::vector<RatMatrix>& gens) {
  for (const auto& g : gens)
    if (!column_span_contains(basis, RatMatrix(g.transpose() * basis))) return false;
  return true;
}

std::string to_string(Branch b) {
  switch (b) {
    case Branch::contained_in_fixed: return "contained_in_fixed";
    case Branch::contains_L_m_block: return "contains_L_m_block";
    case Branch::neither: return "neither";
  }
  return "?";
}

namespace {

RatMatrix coordinate_span(size_t d, const std::vector<size_t>& coords) {
  RatMatrix b(d, coords.size());
  for (size_t k = 0; k < coords.size(); ++k) b(coords[k], k) = 1;
  return b;
}

std::vector<RatMatrix> mats(const std::vector<GroupElement>& g) {
  std::vector<RatMatrix> out;
  for (const auto& x : g) out.push_back(x.mat);
  return out;
}

Branch branch_of(const RatMatrix& basis, const RatMatrix& fixed, const RatMatrix& block) {
  if (column_span_contains(fixed, basis)) return Branch::contained_in_fixed;
  if (column_span_contains(basis, block)) return Branch::contains_L_m_block;
  return Branch::neither;
}

}  // namespace

Branch classify_D(const GroupParams& p, const RatMatrix& basis) {
  std::vector<size_t> coords;
  for (size_t k = 0; k < len(p, 2); ++k) coords.push_back(off(p, 2) + k);
  return branch_of(basis, fixed_forms(mats(build_D_generators(p)), p.d()), coordinate_span(p.d(), coords));
}

Branch classify_H(const GroupParams& p, const RatMatrix& basis) {
  std::vector<size_t> coords;
  for (size_t k = 0; k < len(p, 0); ++k) coords.push_back(k);
  for (size_t k = 0; k < len(p, 2); ++k) coords.push_back(off(p, 2) + k);
  return branch_of(basis, fixed_forms(mats(build_H_generators(p)), p.d()), coordinate_span(p.d(), coords));
}

// ---- Lie algebra ----------------------------------------------------------

std::string to_string(Sub s) {
  switch (s) {
    case Sub::v_plus: return "v+";
    case Sub::v_minus: return "v-";
    case Sub::v: return "v";
    case Sub::a: return "a";
    case Sub::d: return "d";
    case Sub::c: return "c";
    case Sub::u_minus: return "u-";
    case Sub::u_plus: return "u+";
    case Sub::b_plus: return "b+";
    case Sub::b_minus: return "b-";
  }
  return "?";
}

std::size_t expected_dim(const GroupParams& p, Sub s) {
  const size_t l = p.l(), t = p.tau(), sg = p.sigma();
  switch (s) {
    case Sub::v_plus:
    case Sub::v_minus: return t * l;
    case Sub::v: return t * sg;
    case Sub::a: return t * (t ? t - 1 : 0) / 2;
    case Sub::d: return sg * (sg ? sg - 1 : 0) / 2;
    case Sub::c: return l * l;
    case Sub::u_minus:
    case Sub::u_plus: return l * sg;
    case Sub::b_plus:
    case Sub::b_minus: return l * (l ? l - 1 : 0) / 2;
  }
  return 0;
}

RatMatrix embed(const GroupParams& p, Sub s, const RatMatrix& x) {
  RatMatrix f(p.d(), p.d());
  const RatMatrix jt = Jt(p), js = Js(p);
  switch (s) {
    case Sub::v_plus:
      put(p, f, 1, 3, x);
      put(p, f, 0, 1, -(x.transpose() * jt));
      break;
    case Sub::v_minus:
      put(p, f, 1, 0, x);
      put(p, f, 3, 1, -(x.transpose() * jt));
      break;
    case Sub::v:
      put(p, f, 1, 2, x);
      put(p, f, 2, 1, -(js * x.transpose() * jt));
      break;
    case Sub::a: put(p, f, 1, 1, x); break;
    case Sub::d: put(p, f, 2, 2, x); break;
    case Sub::c:
      put(p, f, 0, 0, x);
      put(p, f, 3, 3, -x.transpose());
      break;
    case Sub::u_minus:
      put(p, f, 3, 2, x);
      put(p, f, 2, 0, -(js * x.transpose()));
      break;
    case Sub::u_plus:
      put(p, f, 0, 2, x);
      put(p, f, 2, 3, -(js * x.transpose()));
      break;
    case Sub::b_plus: put(p, f, 0, 3, x); break;
    case Sub::b_minus: put(p, f, 3, 0, x); break;
  }
  return f;
}

namespace {

std::vector<RatMatrix> param_basis(const GroupParams& p, Sub s) {
  const auto [bi, bj] = defining_block(s);
  const size_t r = len(p, bi), c = len(p, bj);
  std::vector<RatMatrix> out;
  if (s == Sub::a) return so_basis(Jt(p));
  if (s == Sub::d) return so_basis(Js(p));
  if (s == Sub::b_plus || s == Sub::b_minus) {
    for (size_t i = 0; i < r; ++i)
      for (size_t j = i + 1; j < r; ++j) out.push_back(unit(r, r, i, j) - unit(r, r, j, i));
    return out;
  }
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j) out.push_back(unit(r, c, i, j));
  return out;
}

SubspaceBasis make_basis(const GroupParams& p, Sub s, const std::vector<RatMatrix>& params, std::string label) {
  SubspaceBasis b{std::move(label), {}};
  for (const auto& x : params) {
    RatMatrix f = embed(p, s, x);
    b.elems.push_back({f, classify(p, f)});
  }
  return b;
}

}  // namespace

SubspaceBasis subspace_basis(const GroupParams& p, Sub s) {
  return make_basis(p, s, param_basis(p, s), to_string(s));
}

SubspaceBasis v_k_basis(const GroupParams& p, int k) {
  if (k < 1 || k > p.tau()) throw DimensionError("v_k needs 1 <= k <= tau");
  std::vector<RatMatrix> params;
  for (int j = 0; j < p.sigma(); ++j) params.push_back(unit(p.tau(), p.sigma(), k - 1, j));
  return make_basis(p, Sub::v, params, "v_" + std::to_string(k));
}

SubspaceBasis u_k_basis(const GroupParams& p, int k, bool plus) {
  if (k < 1 || k > p.l()) throw DimensionError("u_k needs 1 <= k <= l");
  std::vector<RatMatrix> params;
  for (int j = 0; j < p.sigma(); ++j) params.push_back(unit(p.l(), p.sigma(), k - 1, j));
  return make_basis(p, plus ? Sub::u_plus : Sub::u_minus, params,
                    std::string("u_") + std::to_string(k) + (plus ? "+" : "-"));
}

std::map<Sub, RatMatrix> decompose(const GroupParams& p, const RatMatrix& f) {
  std::map<Sub, RatMatrix> out;
  for (Sub s : kAllSubs) {
    const auto [bi, bj] = defining_block(s);
    out.emplace(s, embed(p, s, blk(p, f, bi, bj)));
  }
  return out;
}

bool in_so(const RatMatrix& f, const RatMatrix& qprime) {
  return (f.transpose() * qprime + qprime * f).is_zero();
}

std::vector<Sub> classify(const GroupParams& p, const RatMatrix& f) {
  std::vector<Sub> tags;
  if (f.is_zero()) return {kAllSubs, kAllSubs + std::size(kAllSubs)};
  for (const auto& [s, part] : decompose(p, f))
    if (part == f) tags.push_back(s);
  return tags;
}

AlgebraElement lie_bracket(const GroupParams& p, const AlgebraElement& a, const AlgebraElement& b) {
  RatMatrix c = a.mat * b.mat - b.mat * a.mat;
  auto tags = classify(p, c);
  return {std::move(c), std::move(tags)};
}

// ---- coordinate changes ---------------------------------------------------

ScaledMatrix build_eta0(const GroupParams& p, const QMatrix& middle) {
  if (p.i1 || p.i2 || p.i3) throw DimensionError("eta_0 needs i = 0");
  const size_t t = p.tau(), d = p.d(), o = off(p, 1);
  if (middle.rows() != t || !middle.square()) throw DimensionError("middle form has wrong size");
  const auto dz = congruence_diagonalize(middle);
  std::vector<size_t> order;
  for (size_t k = 0; k < t; ++k)
    if (dz.values[k].sign() > 0) order.push_back(k);
  if (order.size() != size_t(p.p1)) throw HypothesisError("signature", "middle form signature is not (p', q')");
  for (size_t k = 0; k < t; ++k)
    if (dz.values[k].sign() < 0) order.push_back(k);
  if (order.size() != t) throw HypothesisError("nondegenerate", "middle form is degenerate");
  QMatrix core = QMatrix::identity(d);
  std::vector<QuadScalar> left(d, QuadScalar(1)), right(d, QuadScalar(1));
  for (size_t j = 0; j < t; ++j) {
    const size_t k = order[j];
    for (size_t i = 0; i < t; ++i) core(o + i, o + j) = dz.transform(i, k);
    const QuadScalar v = dz.values[k];
    right[o + j] = QuadScalar(1) / (v.sign() > 0 ? v : -v);
  }
  return ScaledMatrix(left, core, right);
}

ScaledMatrix build_eta1(const GroupParams& p, const RatMatrix& a1, const RatMatrix& a2) {
  if (a1.rows() != size_t(p.l()) || a2.rows() != size_t(p.tau()))
    throw DimensionError("eta_1 blocks must be l x l and tau x tau");
  RatMatrix g = RatMatrix::identity(p.d());
  put(p, g, 0, 0, a1);
  put(p, g, 1, 1, a2);
  put(p, g, 3, 3, a1);
  return ScaledMatrix(q_of(g));
}

ScaledMatrix build_eta2(const GroupParams& p, const Rational& alpha1, const Rational& alpha2) {
  const size_t l = p.l(), t = p.tau(), d = p.d();
  require(l >= 1, "l_positive", "eta_2 needs l >= 1");
  require(sgn(alpha1) == 0 || p.tau1() >= 1, "tau1_positive", "alpha_1 needs a positive middle coordinate");
  require(sgn(alpha2) == 0 || p.tau2() >= 1, "tau2_positive", "alpha_2 needs a negative middle coordinate");
  const Rational alpha = (alpha2 * alpha2 - alpha1 * alpha1) / 2;
  RatMatrix g = RatMatrix::identity(d);
  if (sgn(alpha1) != 0) {
    g(l, l - 1) += alpha1;
    g(d - 1, l) -= alpha1;
  }
  if (sgn(alpha2) != 0) {
    g(l + t - 1, l - 1) += alpha2;
    g(d - 1, l + t - 1) += alpha2;
  }
  g(d - 1, l - 1) += alpha;
  return ScaledMatrix(q_of(g));
}

ScaledMatrix build_eta3(const GroupParams& p) {
  const size_t l = p.l(), t = p.tau(), sg = p.sigma(), d = p.d();
  require(l >= 1, "l_positive", "eta_3 needs l >= 1");
  auto rows = identity_rows(d);
  for (size_t i = l; i < l + t; ++i) rows[i].terms = {{i - 1, Rational(1)}};
  for (size_t i = l + t + sg; i + 1 < d; ++i) rows[i].terms = {{i + 1, Rational(1)}};
  rows[l - 1] = {Rational(1, 2), {{l + t - 1, Rational(1)}, {l + t + sg, Rational(-1)}}};
  rows[d - 1] = {Rational(1, 2), {{l + t - 1, Rational(1)}, {l + t + sg, Rational(1)}}};
  return from_rows(rows);
}

ScaledMatrix build_eta4(const GroupParams& p, bool mirror) {
  const size_t l = p.l(), t = p.tau(), s1 = p.sigma1(), d = p.d();
  auto rows = identity_rows(d);
  if (!mirror) {
    require(p.tau1() >= 1, "tau1_positive", "eta_4 needs a positive middle coordinate");
    rows[l].terms = {{l + t - 1, Rational(1)}};
    for (size_t i = l + 1; i < l + t; ++i) rows[i].terms = {{i - 1, Rational(1)}};
  } else {
    require(p.tau2() >= 1, "tau2_positive", "mirrored eta_4 needs a negative middle coordinate");
    rows[l + t - 1].terms = {{l + t + s1 - 1, Rational(1)}};
    for (size_t i = l + t; i < l + t + s1; ++i) rows[i].terms = {{i - 1, Rational(1)}};
  }
  return from_rows(rows);
}

ScaledMatrix build_eta5(const GroupParams& p) {
  const size_t l = p.l(), t = p.tau(), d = p.d();
  require(p.tau1() >= 1 && p.tau2() >= 1, "tau_mixed", "eta_5 needs middle coordinates of both signs");
  auto rows = identity_rows(d);
  for (size_t i = l + t; i < d; ++i) rows[i].terms = {{i - 1, Rational(1)}};
  rows[l] = {Rational(1, 2), {{l, Rational(1)}, {d - 1, Rational(1)}}};
  rows[l + t - 1] = {Rational(1, 2), {{l, Rational(1)}, {d - 1, Rational(-1)}}};
  return from_rows(rows);
}

RatMatrix random_SO(int n, std::mt19937_64& rng) {
  RatMatrix h = RatMatrix::identity(n);
  for (int a = 0; a + 1 < n; ++a) h = h * rotation(n, a, a + 1, rand_nonzero(rng));
  return h;
}

RatMatrix random_O(int a, int b, std::mt19937_64& rng) {
  const int n = a + b;
  RatMatrix h = RatMatrix::identity(n);
  for (int k = 0; k + 1 < n; ++k) {
    Rational t = rand_nonzero(rng);
    if (k + 1 == a) {
      while (abs(t) >= 1) t /= 2;
      h = h * boost(n, k, k + 1, t);
    } else {
      h = h * rotation(n, k, k + 1, t);
    }
  }
  if (n > 0 && std::uniform_int_distribution<int>(0, 1)(rng)) {
    RatMatrix f = RatMatrix::identity(n);
    f(0, 0) = -1;
    h = h * f;
  }
  return h;
}

// ---- verification ---------------------------------------------------------

bool Scorecard::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.informational || c.pass; });
}

namespace {

struct Recorder {
  Scorecard& card;
  void operator()(std::string name, bool pass, std::string witness = "", bool info = false) {
    card.checks.push_back({std::move(name), pass, info, std::move(witness)});
  }
};

RatMatrix random_combo(const GroupParams& p, std::mt19937_64& rng, const std::vector<Sub>& subs, int terms) {
  std::vector<RatMatrix> pool;
  for (Sub s : subs)
    for (auto& x : param_basis(p, s)) pool.push_back(embed(p, s, x));
  RatMatrix f(p.d(), p.d());
  if (pool.empty()) return f;
  std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
  for (int k = 0; k < terms; ++k) f += pool[pick(rng)] * rand_nonzero(rng);
  return f;
}

// Components of f outside the allowed subspaces.
std::vector<Sub> stray(const GroupParams& p, const RatMatrix& f, const std::vector<Sub>& allowed) {
  std::vector<Sub> out;
  for (const auto& [s, part] : decompose(p, f))
    if (!part.is_zero() && std::find(allowed.begin(), allowed.end(), s) == allowed.end()) out.push_back(s);
  return out;
}

std::string names(const std::vector<Sub>& s) {
  std::string out;
  for (Sub x : s) out += (out.empty() ? "" : ",") + to_string(x);
  return out;
}

void check_eta(Recorder& rec, const std::string& name, const GroupParams& src, const GroupParams& dst,
               const std::function<ScaledMatrix()>& make) {
  const bool ok = congruence_check(q_of(build_Q_prime(dst)), make(), q_of(build_Q_prime(src)));
  rec(name, ok, ok ? "" : "congruence fails from " + src.str() + " to " + dst.str());
}

}  // namespace

Scorecard verify_algebra(const GroupParams& p, int samples, std::uint64_t seed) {
  Scorecard card{p, {}};
  Recorder rec{card};
  std::mt19937_64 rng(seed);
  const RatMatrix qp = build_Q_prime(p);
  const int lead = p.l() + p.tau();
  const int l = p.l(), sg = p.sigma();

  // group elements
  {
    bool ok = true;
    std::string w;
    for (int k = 0; k < samples && ok; ++k) {
      const auto u = random_U(p, rng);
      if (!preserves(u.mat, qp) || !fixes_leading(u.mat, lead)) ok = false, w = "t=" + brief(u.t);
    }
    rec("group.U_preserves", ok, w);
    ok = true;
    w.clear();
    for (const auto& g : build_D_generators(p))
      if (!preserves(g.mat, qp) || !fixes_leading(g.mat, lead)) ok = false, w = g.kind;
    for (int k = 0; k < samples && ok; ++k) {
      const auto g = random_D(p, rng);
      if (!preserves(g, qp) || !fixes_leading(g, lead)) ok = false, w = "random product";
    }
    rec("group.D_preserves", ok, w);
    ok = true;
    w.clear();
    for (int k = 0; k < samples && ok; ++k) {
      const RatMatrix u = rand_matrix(rng, l, sg);
      const RatMatrix ex = exp_nilpotent(embed(p, Sub::u_minus, u));
      if (ex != build_U(p, u, u * Js(p) * u.transpose() * Rational(-1, 2)).mat) ok = false, w = brief(u);
    }
    rec("group.exp_u_minus", ok, w);
    ok = true;
    w.clear();
    for (int k = 0; k < samples && ok; ++k)
      if (!normalizes(p, random_D(p, rng), random_U(p, rng).mat)) ok = false, w = "sample " + std::to_string(k);
    rec("group.D_normalizes_U", ok, w);
  }

  // decomposition of so(Q')
  {
    bool so_ok = true, dim_ok = true;
    std::string w;
    std::vector<RatMatrix> flat;
    for (Sub s : kAllSubs) {
      const auto b = subspace_basis(p, s);
      if (b.dim() != expected_dim(p, s)) dim_ok = false, w = to_string(s) + " has dim " + std::to_string(b.dim());
      for (const auto& e : b.elems) {
        if (!in_so(e.mat, qp)) so_ok = false, w = to_string(s) + " element outside so(Q')";
        if (std::find(e.tags.begin(), e.tags.end(), s) == e.tags.end()) so_ok = false, w = to_string(s) + " retag";
        flat.push_back(e.mat);
      }
    }
    const size_t d = p.d();
    RatMatrix cols(d * d, flat.size());
    for (size_t k = 0; k < flat.size(); ++k)
      for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j) cols(i * d + j, k) = flat[k](i, j);
    const size_t rk = rank(cols);
    if (rk != flat.size() || rk != d * (d - 1) / 2)
      dim_ok = false, w = "direct sum has rank " + std::to_string(rk) + " of " + std::to_string(d * (d - 1) / 2);
    rec("algebra.in_so", so_ok, so_ok ? "" : w);
    rec("algebra.direct_sum", dim_ok, dim_ok ? "" : w);
  }

  const std::vector<Sub> rest = {Sub::v_plus, Sub::v_minus, Sub::v,      Sub::a,
                                 Sub::c,      Sub::u_plus,  Sub::b_plus, Sub::b_minus};

  // [f', d] lies in v + u+ when f' has no u- or d component
  {
    bool ok = true;
    std::string w;
    for (int k = 0; k < samples && ok && sg >= 2; ++k) {
      const RatMatrix f = random_combo(p, rng, rest, 4);
      const RatMatrix x = random_combo(p, rng, {Sub::d}, 2);
      const RatMatrix b = f * x - x * f;
      const auto bad = stray(p, b, {Sub::v, Sub::u_plus});
      if (!bad.empty() || !in_so(b, qp)) ok = false, w = "components " + names(bad);
      else if (blk(p, b, 0, 2) != blk(p, f, 0, 2) * blk(p, x, 2, 2) ||
               blk(p, b, 1, 2) != blk(p, f, 1, 2) * blk(p, x, 2, 2))
        ok = false, w = "block (1,3)/(2,3) differs from f13 d, f23 d";
    }
    rec("bracket.f_prime_d", ok, w);
  }

  // [f', u-] has a non-zero v + u+ part when f14 or f24 is non-zero
  if (l >= 1 && (l >= 2 || p.tau() >= 1) && sg >= 1) {
    bool ok = true;
    std::string w;
    const auto ubasis = subspace_basis(p, Sub::u_minus);
    const std::vector<Sub> low = {Sub::v_plus, Sub::v_minus, Sub::a, Sub::c, Sub::b_plus, Sub::b_minus};
    std::vector<Sub> top;
    if (p.tau() >= 1) top.push_back(Sub::v_plus);
    if (l >= 2) top.push_back(Sub::b_plus);
    for (int k = 0; k < samples && ok; ++k) {
      RatMatrix f = random_combo(p, rng, low, 3) + random_combo(p, rng, top, 1);
      if (blk(p, f, 0, 3).is_zero() && blk(p, f, 1, 3).is_zero()) continue;
      bool hit = false;
      for (const auto& u : ubasis.elems) {
        const RatMatrix b = f * u.mat - u.mat * f;
        const RatMatrix u13 = blk(p, u.mat, 3, 2);
        if (blk(p, b, 0, 2) != blk(p, f, 0, 3) * u13 || blk(p, b, 1, 2) != blk(p, f, 1, 3) * u13) {
          ok = false, w = "block (1,3)/(2,3) differs from f14 u, f24 u";
          break;
        }
        if (!decompose(p, b).at(Sub::v).is_zero() || !decompose(p, b).at(Sub::u_plus).is_zero()) hit = true;
      }
      if (ok && !hit) ok = false, w = "f14/f24 non-zero but every bracket projects to zero";
    }
    rec("bracket.f_prime_u_minus", ok, w);
  }

  // [u-, u-] = b-
  {
    bool ok = true;
    std::string w;
    const auto ub = subspace_basis(p, Sub::u_minus);
    RatMatrix span;
    for (size_t a = 0; a < ub.dim() && ok; ++a)
      for (size_t b = a + 1; b < ub.dim(); ++b) {
        const auto c = lie_bracket(p, ub.elems[a], ub.elems[b]);
        if (std::find(c.tags.begin(), c.tags.end(), Sub::b_minus) == c.tags.end()) {
          ok = false, w = "bracket outside b-";
          break;
        }
        RatMatrix v(size_t(l * l), 1);
        const RatMatrix blk41 = blk(p, c.mat, 3, 0);
        for (int i = 0; i < l; ++i)
          for (int j = 0; j < l; ++j) v(i * l + j, 0) = blk41(i, j);
        span = hstack(span, v);
      }
    const size_t want = expected_dim(p, Sub::b_minus);
    const size_t got = span.cols() ? rank(span) : 0;
    if (ok && got != want) ok = false, w = "span has dim " + std::to_string(got) + ", b- has " + std::to_string(want);
    if (sg == 0 && want > 0) {
      // u- = 0 here; such indices are not reachable from i = 0 (sigma >= r + n on every walk)
      rec("bracket.u_minus_u_minus_sigma0", ok, w + " (sigma = 0)", true);
    } else {
      rec("bracket.u_minus_u_minus", ok, w);
    }
  }

  // [u_l+, u_l-]: c* = <b_ll - b_dd> plus a d component; closure of the subalgebra
  if (l >= 1 && sg >= 1) {
    const auto up = u_k_basis(p, l, true), um = u_k_basis(p, l, false);
    const RatMatrix cstar = embed(p, Sub::c, unit(l, l, l - 1, l - 1));
    bool corrected = true, literal = true, nonzero_c = false;
    std::string w, wl;
    for (const auto& a : up.elems)
      for (const auto& b : um.elems) {
        const RatMatrix br = a.mat * b.mat - b.mat * a.mat;
        const auto parts = decompose(p, br);
        const RatMatrix cpart = parts.at(Sub::c);
        const RatMatrix c11 = blk(p, cpart, 0, 0);
        bool c_ok = true;
        for (int i = 0; i < l; ++i)
          for (int j = 0; j < l; ++j)
            if ((i != l - 1 || j != l - 1) && sgn(c11(i, j)) != 0) c_ok = false;
        if (!cpart.is_zero()) nonzero_c = true;
        if (!c_ok || !stray(p, br, {Sub::c, Sub::d}).empty()) corrected = false, w = "bracket leaves d + c*";
        if (!parts.at(Sub::d).is_zero()) literal = false, wl = "d component " + brief(blk(p, br, 2, 2));
      }
    if (!nonzero_c) corrected = false, w = "c component never reached";
    rec("bracket.u_l_c_star", corrected, w);
    rec("bracket.u_l_c_star_literal", literal, wl, true);

    // closure of u_l- + d + c* + u_l+
    std::vector<RatMatrix> gens;
    for (const auto& e : um.elems) gens.push_back(e.mat);
    for (const auto& e : subspace_basis(p, Sub::d).elems) gens.push_back(e.mat);
    gens.push_back(cstar);
    for (const auto& e : up.elems) gens.push_back(e.mat);
    bool closed = true;
    std::string wc;
    auto inside = [&](const RatMatrix& f) {
      const auto parts = decompose(p, f);
      for (const auto& [s, part] : parts) {
        if (part.is_zero() || s == Sub::d) continue;
        if (s == Sub::c) {
          if (part != cstar * blk(p, f, 0, 0)(l - 1, l - 1)) return false;
        } else if (s == Sub::u_minus || s == Sub::u_plus) {
          const RatMatrix prm = blk(p, f, defining_block(s).first, defining_block(s).second);
          for (int i = 0; i + 1 < l; ++i)
            for (int j = 0; j < sg; ++j)
              if (sgn(prm(i, j)) != 0) return false;
        } else {
          return false;
        }
      }
      return true;
    };
    for (size_t a = 0; a < gens.size() && closed; ++a)
      for (size_t b = a + 1; b < gens.size(); ++b)
        if (!inside(gens[a] * gens[b] - gens[b] * gens[a])) {
          closed = false, wc = "bracket of generators " + std::to_string(a) + "," + std::to_string(b);
          break;
        }
    const size_t want = size_t(sg + 2) * size_t(sg + 1) / 2;
    if (closed && gens.size() != want) closed = false, wc = "dimension " + std::to_string(gens.size());
    rec("bracket.u_l_subalgebra", closed, wc);
  }

  // eta_2 fixes u- + d elementwise
  if (l >= 1 && p.tau() >= 1) {
    const Rational a1 = p.tau1() ? rand_nonzero(rng) : Rational(0);
    const Rational a2 = p.tau2() ? rand_nonzero(rng) : Rational(0);
    const RatMatrix e2 = build_eta2(p, a1, a2).as_field()->map([](const QuadScalar& x) { return x.a(); });
    bool ok = true;
    for (Sub s : {Sub::u_minus, Sub::d})
      for (const auto& e : subspace_basis(p, s).elems)
        if (e2 * e.mat != e.mat || e.mat * e2 != e.mat) ok = false;
    rec("eta2.commutes", ok, ok ? "" : "eta_2 u != u");
    check_eta(rec, "eta2.congruence", p, p, [&] { return build_eta2(p, a1, a2); });
  }

  // eta_1
  {
    const RatMatrix a1 = random_SO(l, rng), a2 = random_O(p.tau1(), p.tau2(), rng);
    const std::string flag = (l == 0 || p.tau() == 0) ? "degenerate branch (l = 0 or tau = 0)" : "";
    const bool ok = congruence_check(q_of(qp), build_eta1(p, a1, a2), q_of(qp));
    rec("eta1.congruence", ok, ok ? flag : "congruence fails");
  }

  // eta_3, eta_4, eta_5 where the target index is valid
  if (p.i3 < p.m && p.shifted(0, 0, 1).valid())
    check_eta(rec, "eta3.congruence", p, p.shifted(0, 0, 1), [&] { return build_eta3(p); });
  if (p.i1 < p.p1 && p.shifted(1, 0, 0).valid())
    check_eta(rec, "eta4.congruence", p, p.shifted(1, 0, 0), [&] { return build_eta4(p); });
  if (p.i2 < p.q1 && p.shifted(0, 1, 0).valid())
    check_eta(rec, "eta4_mirror.congruence", p, p.shifted(0, 1, 0), [&] { return build_eta4(p, true); });
  if (p.i1 < p.p1 && p.i2 < p.q1 && p.shifted(1, 1, -1).valid())
    check_eta(rec, "eta5.congruence", p, p.shifted(1, 1, -1), [&] { return build_eta5(p); });

  // eta_0 against a random middle form of signature (p', q')
  if (p.i1 == 0 && p.i2 == 0 && p.i3 == 0 && p.tau() >= 1) {
    RatMatrix g;
    do g = rand_matrix(rng, p.tau(), p.tau());
    while (rank(g) != size_t(p.tau()));
    const QMatrix middle = q_of(g.transpose() * Jt(p) * g);
    const bool ok = congruence_check(q_of(qp), build_eta0(p, middle), build_Q0(p, middle));
    rec("eta0.congruence", ok, ok ? "" : "middle " + brief(g.transpose() * Jt(p) * g));
  }
  return card;
}

WalkReport index_walk_check(int p1, int q1, int m) {
  WalkReport rep;
  GroupParams base{p1, q1, m, 0, 0, 0, 0, 0};
  const int lo = -std::min(p1, q1);
  auto ok_state = [&](int a, int b, int c) { return a >= 0 && a <= p1 && b >= 0 && b <= q1 && c >= lo && c <= m; };
  auto moves = [&](int a, int b, int c) {
    std::vector<std::array<int, 3>> out;
    if (a < p1) out.push_back({a + 1, b, c});
    if (b < q1) out.push_back({a, b + 1, c});
    if (c < m) out.push_back({a, b, c + 1});
    if (a < p1 && b < q1 && c > lo) out.push_back({a + 1, b + 1, c - 1});
    return out;
  };
  const int top = p1 + q1 + m;
  // longest path by decreasing potential (every move raises it by exactly one)
  std::map<std::array<int, 3>, int> longest;
  for (int pot = top; pot >= lo; --pot)
    for (int a = 0; a <= p1; ++a)
      for (int b = 0; b <= q1; ++b) {
        const int c = pot - a - b;
        if (!ok_state(a, b, c)) continue;
        ++rep.states;
        int best = 0;
        const auto next = moves(a, b, c);
        if (next.empty() && !(a == p1 && b == q1 && c == m)) {
          rep.ok = false;
          rep.witness = "dead end at (" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
        }
        for (const auto& s : next) {
          if (s[0] + s[1] + s[2] != pot + 1 || !ok_state(s[0], s[1], s[2])) {
            rep.ok = false;
            rep.witness = "move does not raise i1+i2+i3 by one";
          }
          best = std::max(best, 1 + longest[s]);
        }
        longest[{a, b, c}] = best;
      }
  (void)base;
  rep.longest_from_origin = longest[{0, 0, 0}];
  if (rep.longest_from_origin != top) {
    rep.ok = false;
    rep.witness = "longest path " + std::to_string(rep.longest_from_origin) + " != " + std::to_string(top);
  }
  return rep;
}

}  // namespace qdl
