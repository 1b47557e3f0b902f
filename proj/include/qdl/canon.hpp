#pragma once

// Reduction of (Q, M) to the canonical pair
//   Q0 = middle(x_{m+1..s}) + 2 sum_{i<=m} x_i x_{s+r+n+i} + sum x_{s+1..s+r}^2 - sum x_{s+r+1..s+r+n}^2
//   M0 = (x_1, ..., x_s)
// with a certificate (g_d, g_s) such that Q(x) = Q0(g_d x), M(x) = g_s M0(g_d x).

#include <string>

#include "qdl/quadforms.hpp"
#include "qdl/scaled_matrix.hpp"

namespace qdl {

struct CanonicalParams {
  int m = 0;
  int p1 = 0;  // p'
  int q1 = 0;  // q'
  int r = 0;
  int n = 0;
  QMatrix middle;  // gram of the middle form on x_{m+1..s}

  int s() const { return m + p1 + q1; }
  int d() const { return s() + r + n + m; }
};

/// pair: the layout above.  single_1b: s = 1 with the map in the last,
/// negative slot, Q0 = sum_{i<=p} x_i^2 - sum_{i>p} x_i^2, M0 = x_d.
enum class Layout { pair, single_1b };

struct CanonicalCertificate {
  ScaledMatrix g_d;
  ScaledMatrix g_s;
  CanonicalParams params;
  Layout layout = Layout::pair;
};

enum class SingleCase { c1a, c1b, c2 };
std::string to_string(SingleCase c);

struct SingleReduction {
  CanonicalCertificate cert;
  SingleCase tag;
};

/// Gram of Q0 and the matrix of M0.
QMatrix canonical_gram(const CanonicalParams& p, Layout layout = Layout::pair);
QMatrix canonical_map(const CanonicalParams& p, Layout layout = Layout::pair);

SingleReduction reduce_single(const QuadraticForm& q, const LinearMap& l);
CanonicalCertificate reduce_pair(const QuadraticForm& q, const LinearMap& m);
bool verify_certificate(const QuadraticForm& q, const LinearMap& m, const CanonicalCertificate& cert);

}  // namespace qdl
