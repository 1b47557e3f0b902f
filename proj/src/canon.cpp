#include "qdl/canon.hpp"

namespace qdl {

namespace {

// Basis adapted to (Q, M): columns of `core`, each scaled by sqrt(root).
struct AdaptedBasis {
  QMatrix c;       // d x m, pairs with z
  QMatrix middle;  // d x (s-m)
  QMatrix wpos, wneg, z;
  std::vector<QuadScalar> lpos, lneg;  // Q values of wpos, wneg
};

QMatrix columns(const QMatrix& k, const std::vector<std::size_t>& idx) {
  QMatrix out(k.rows(), idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j)
    for (std::size_t i = 0; i < k.rows(); ++i) out(i, j) = k(i, idx[j]);
  return out;
}

// Null space of rows restricted to the span of `within`, as vectors in R^d.
QMatrix null_within(const QMatrix& rows, const QMatrix& within) {
  if (rows.rows() == 0) return within;
  return within * null_space(rows * within);
}

AdaptedBasis adapt(const QMatrix& a, const QMatrix& map) {
  const std::size_t d = a.rows();
  const QMatrix k = null_space(map);
  const auto dz = congruence_diagonalize(k.transpose() * a * k);
  const QMatrix kd = k * dz.transform;
  std::vector<std::size_t> pos, neg, zero;
  AdaptedBasis b;
  for (std::size_t j = 0; j < dz.values.size(); ++j) {
    const int sg = dz.values[j].sign();
    (sg > 0 ? pos : sg < 0 ? neg : zero).push_back(j);
    if (sg > 0) b.lpos.push_back(dz.values[j]);
    if (sg < 0) b.lneg.push_back(dz.values[j]);
  }
  b.wpos = columns(kd, pos);
  b.wneg = columns(kd, neg);
  b.z = columns(kd, zero);
  const QMatrix w = hstack(b.wpos, b.wneg);
  const QMatrix wperp = null_within(w.transpose() * a, QMatrix::identity(d));
  const std::size_t m = zero.size();
  if (m > 0) {
    const QMatrix za = b.z.transpose() * a;
    const auto u = solve(za * wperp, QMatrix::identity(m));
    if (!u) throw InvariantBreach("no dual vectors for the radical of Q|ker M");
    const QMatrix y = wperp * *u;
    b.c = y - b.z * (y.transpose() * a * y) * QuadScalar(Rational(1, 2));
    b.middle = null_within(vstack(za, b.c.transpose() * a), wperp);
  } else {
    b.c = QMatrix(d, 0);
    b.middle = wperp;
  }
  return b;
}

struct Column {
  QMatrix v;        // d x 1
  QuadScalar root;  // column is v * sqrt(root)
};

void append(std::vector<Column>& cols, const QMatrix& block, const std::vector<QuadScalar>* roots = nullptr) {
  for (std::size_t j = 0; j < block.cols(); ++j)
    cols.push_back({block.column(j), roots ? (*roots)[j].inverse() * QuadScalar((*roots)[j].sign()) : QuadScalar(1)});
}

// g_d = P^{-1} for P = P_core diag(sqrt roots).
ScaledMatrix inverse_of_columns(const std::vector<Column>& cols) {
  const std::size_t d = cols.size();
  QMatrix core(d, d);
  std::vector<QuadScalar> left(d);
  for (std::size_t j = 0; j < d; ++j) {
    core.set_block(0, j, cols[j].v);
    left[j] = cols[j].root.inverse();
  }
  return {std::move(left), inverse(core), std::vector<QuadScalar>(d, QuadScalar(1))};
}

void require_nondegenerate(const QuadraticForm& q) {
  if (signature(q).rank() != static_cast<int>(q.dim()))
    throw HypothesisError("nondegenerate", "quadratic form is degenerate");
}

void require_rank(const LinearMap& m) {
  if (rank(m.rows()) != m.s())
    throw HypothesisError("rank_M", "linear map has rank below s = " + std::to_string(m.s()));
}

// Shared construction; `single` relaxes the indefiniteness hypothesis.
CanonicalCertificate build(const QuadraticForm& q, const LinearMap& map, bool single) {
  if (q.dim() != map.dim()) throw DimensionError("Q and M act on different dimensions");
  require_nondegenerate(q);
  require_rank(map);
  const QMatrix& a = q.gram();
  AdaptedBasis b = adapt(a, map.rows());
  CanonicalParams params;
  params.m = static_cast<int>(b.z.cols());
  params.r = static_cast<int>(b.wpos.cols());
  params.n = static_cast<int>(b.wneg.cols());
  if (!single && (params.r < 1 || params.n < 1))
    throw HypothesisError("indefinite_restricted", "Q restricted to ker M is not indefinite");

  std::vector<Column> cols;
  CanonicalCertificate cert;
  QMatrix head = hstack(b.c, b.middle);  // columns feeding g_s
  QuadScalar head_root(1);
  params.middle = b.middle.transpose() * a * b.middle;
  if (single && params.m == 0) {
    // s = 1: normalize the single middle value to +-1
    const QuadScalar lambda = params.middle(0, 0);
    head_root = (lambda.sign() > 0 ? lambda : -lambda).inverse();
    params.middle(0, 0) = lambda.sign();
    if (lambda.sign() < 0) cert.layout = Layout::single_1b;
  }
  const Signature sig = signature(params.middle);
  params.p1 = sig.p;
  params.q1 = sig.q;

  if (cert.layout == Layout::single_1b) {
    append(cols, b.wpos, &b.lpos);
    append(cols, b.wneg, &b.lneg);
    cols.push_back({b.middle, head_root});
  } else {
    append(cols, b.c);
    for (std::size_t j = 0; j < b.middle.cols(); ++j) cols.push_back({b.middle.column(j), head_root});
    append(cols, b.wpos, &b.lpos);
    append(cols, b.wneg, &b.lneg);
    append(cols, b.z);
  }
  cert.g_d = inverse_of_columns(cols);
  cert.g_s = ScaledMatrix(std::vector<QuadScalar>(map.s(), head_root), map.rows() * head,
                          std::vector<QuadScalar>(map.s(), QuadScalar(1)));
  cert.params = std::move(params);
  return cert;
}

}  // namespace

std::string to_string(SingleCase c) {
  switch (c) {
    case SingleCase::c1a: return "1a";
    case SingleCase::c1b: return "1b";
    case SingleCase::c2: return "2";
  }
  return "?";
}

QMatrix canonical_gram(const CanonicalParams& p, Layout layout) {
  const int d = p.d();
  QMatrix g(d, d);
  if (layout == Layout::single_1b) {
    for (int i = 0; i < p.r; ++i) g(i, i) = 1;
    for (int i = p.r; i < d; ++i) g(i, i) = -1;
    return g;
  }
  const int s = p.s();
  if (p.middle.rows() != static_cast<std::size_t>(s - p.m))
    throw DimensionError("middle form has wrong size");
  g.set_block(p.m, p.m, p.middle);
  for (int i = 0; i < p.m; ++i) {
    g(i, s + p.r + p.n + i) = 1;
    g(s + p.r + p.n + i, i) = 1;
  }
  for (int i = s; i < s + p.r; ++i) g(i, i) = 1;
  for (int i = s + p.r; i < s + p.r + p.n; ++i) g(i, i) = -1;
  return g;
}

QMatrix canonical_map(const CanonicalParams& p, Layout layout) {
  const int d = p.d(), s = p.s();
  QMatrix m0(s, d);
  if (layout == Layout::single_1b) {
    m0(0, d - 1) = 1;
    return m0;
  }
  for (int i = 0; i < s; ++i) m0(i, i) = 1;
  return m0;
}

SingleReduction reduce_single(const QuadraticForm& q, const LinearMap& l) {
  if (l.s() != 1) throw DimensionError("reduce_single needs a single linear form");
  if (l.rows().is_zero()) throw HypothesisError("nonzero_L", "linear form is zero");
  SingleReduction out{build(q, l, true), SingleCase::c1a};
  if (out.cert.params.m == 1)
    out.tag = SingleCase::c2;
  else if (out.cert.layout == Layout::single_1b)
    out.tag = SingleCase::c1b;
  return out;
}

CanonicalCertificate reduce_pair(const QuadraticForm& q, const LinearMap& m) { return build(q, m, false); }

bool verify_certificate(const QuadraticForm& q, const LinearMap& m, const CanonicalCertificate& cert) {
  try {
    const auto& p = cert.params;
    if (p.d() != static_cast<int>(q.dim()) || p.s() != static_cast<int>(m.s())) return false;
    if (cert.g_d.rows() != q.dim() || cert.g_d.cols() != q.dim()) return false;
    if (cert.g_s.rows() != m.s() || cert.g_s.cols() != m.s()) return false;
    if (!congruence_check(q.gram(), cert.g_d, canonical_gram(p, cert.layout))) return false;
    const Matrix<SurdSum> m0 =
        canonical_map(p, cert.layout).map([](const QuadScalar& x) { return SurdSum(x); });
    const Matrix<SurdSum> rebuilt = cert.g_s.expand() * m0 * cert.g_d.expand();
    return rebuilt == m.rows().map([](const QuadScalar& x) { return SurdSum(x); });
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace qdl
