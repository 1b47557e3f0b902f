#pragma once

// The groups U, D, H0* = UD, the block decomposition of so(Q') and the
// coordinate changes eta_0..eta_5, for the family of forms
//
//        | 0  0      0      I_l |
//   Q' = | 0  I_t1,t2 0     0   |      l = m - i3, t_k = p'/q' - i_k,
//        | 0  0      I_s1,s2 0  |      s1 = r + i1 + i3, s2 = n + i2 + i3.
//        | I_l 0     0      0   |

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qdl/matrix.hpp"
#include "qdl/scaled_matrix.hpp"

namespace qdl {

struct GroupParams {
  int p1 = 0, q1 = 0, m = 0, r = 1, n = 2;
  int i1 = 0, i2 = 0, i3 = 0;

  int l() const { return m - i3; }
  int tau1() const { return p1 - i1; }
  int tau2() const { return q1 - i2; }
  int sigma1() const { return r + i1 + i3; }
  int sigma2() const { return n + i2 + i3; }
  int tau() const { return tau1() + tau2(); }
  int sigma() const { return sigma1() + sigma2(); }
  int d() const { return 2 * m + p1 + q1 + r + n; }
  int s() const { return m + p1 + q1; }
  /// 0 <= i1 <= p', 0 <= i2 <= q', -min(p', q') <= i3 <= m, and sigma1, sigma2 >= 0.
  bool valid() const;
  GroupParams shifted(int d1, int d2, int d3) const;
  std::string str() const;
};

/// I_{a,b}.
RatMatrix signature_matrix(int a, int b);
RatMatrix build_Q_prime(const GroupParams& p);
/// Q0 of the canonical pair (i = 0) with the given middle form.
QMatrix build_Q0(const GroupParams& p, const QMatrix& middle);

// ---- groups ---------------------------------------------------------------

struct UElement {
  RatMatrix t;
  RatMatrix s;
  RatMatrix mat;
};

/// Throws HypothesisError("U_constraint") naming the residual s + s^T + t J t^T.
UElement build_U(const GroupParams& p, const RatMatrix& t, const RatMatrix& s);
/// Pattern-matches g against the block shape of U and re-extracts (t, s).
std::optional<UElement> match_U(const GroupParams& p, const RatMatrix& g);
UElement random_U(const GroupParams& p, std::mt19937_64& rng);

struct GroupElement {
  std::string kind;  // "rotation", "boost", "unipotent", "U"
  RatMatrix mat;
};

/// One-parameter generators of D = SO(s1,s2)° in the sigma block; the
/// parameter t enters rotations as ((1-t^2)/(1+t^2), 2t/(1+t^2)) and boosts
/// as ((1+t^2)/(1-t^2), 2t/(1-t^2)).
std::vector<GroupElement> build_D_generators(const GroupParams& p, const Rational& t = Rational(1, 2));
std::vector<GroupElement> build_U_generators(const GroupParams& p);
std::vector<GroupElement> build_H_generators(const GroupParams& p);
RatMatrix random_D(const GroupParams& p, std::mt19937_64& rng, int factors = 3);

/// True iff d u d^{-1} is again in U.
bool normalizes(const GroupParams& p, const RatMatrix& d, const RatMatrix& u);
RatMatrix exp_nilpotent(const RatMatrix& x);
bool preserves(const RatMatrix& g, const RatMatrix& qprime);
/// M0(gx) = M0(x) on the first l + tau coordinates.
bool fixes_leading(const RatMatrix& g, int k);

// ---- forms ----------------------------------------------------------------

/// Columns spanning {v : g^T v = v for all g}.
RatMatrix fixed_forms(const std::vector<RatMatrix>& gens, std::size_t d);
bool invariance_check(const RatMatrix& basis, const std::vector<RatMatrix>& gens);

enum class Branch { contained_in_fixed, contains_L_m_block, neither };
std::string to_string(Branch b);
/// Dichotomy for D-invariant subspaces (L^D versus L_m + U).
Branch classify_D(const GroupParams& p, const RatMatrix& basis);
/// Dichotomy for H0*-invariant subspaces (L^H versus J_m L_0 + U).
Branch classify_H(const GroupParams& p, const RatMatrix& basis);

// ---- Lie algebra ----------------------------------------------------------

enum class Sub { v_plus, v_minus, v, a, d, c, u_minus, u_plus, b_plus, b_minus };
inline constexpr Sub kAllSubs[] = {Sub::v_plus, Sub::v_minus, Sub::v,       Sub::a,      Sub::d,
                                   Sub::c,      Sub::u_minus, Sub::u_plus, Sub::b_plus, Sub::b_minus};
std::string to_string(Sub s);

struct AlgebraElement {
  RatMatrix mat;
  std::vector<Sub> tags;  // subspaces containing mat
};

struct SubspaceBasis {
  std::string label;
  std::vector<AlgebraElement> elems;
  std::size_t dim() const { return elems.size(); }
};

std::size_t expected_dim(const GroupParams& p, Sub s);
SubspaceBasis subspace_basis(const GroupParams& p, Sub s);
/// v_k (1 <= k <= tau), u_k^+ and u_k^- (1 <= k <= l).
SubspaceBasis v_k_basis(const GroupParams& p, int k);
SubspaceBasis u_k_basis(const GroupParams& p, int k, bool plus);

/// Element of the subspace built from its defining block.
RatMatrix embed(const GroupParams& p, Sub s, const RatMatrix& param);
/// Component of f in each subspace (f must lie in so(Q')).
std::map<Sub, RatMatrix> decompose(const GroupParams& p, const RatMatrix& f);
bool in_so(const RatMatrix& f, const RatMatrix& qprime);
std::vector<Sub> classify(const GroupParams& p, const RatMatrix& f);
AlgebraElement lie_bracket(const GroupParams& p, const AlgebraElement& a, const AlgebraElement& b);

// ---- coordinate changes ---------------------------------------------------

ScaledMatrix build_eta0(const GroupParams& p, const QMatrix& middle);
ScaledMatrix build_eta1(const GroupParams& p, const RatMatrix& a1, const RatMatrix& a2);
ScaledMatrix build_eta2(const GroupParams& p, const Rational& alpha1, const Rational& alpha2);
ScaledMatrix build_eta3(const GroupParams& p);
/// mirror = true moves the last (negative) middle coordinate instead.
ScaledMatrix build_eta4(const GroupParams& p, bool mirror = false);
ScaledMatrix build_eta5(const GroupParams& p);

RatMatrix random_SO(int n, std::mt19937_64& rng);
RatMatrix random_O(int a, int b, std::mt19937_64& rng);

// ---- verification ---------------------------------------------------------

struct IdentityCheck {
  std::string name;
  bool pass = true;
  bool informational = false;  // reported, not part of the verdict
  std::string witness;
};

struct Scorecard {
  GroupParams params;
  std::vector<IdentityCheck> checks;
  bool all_pass() const;
};

Scorecard verify_algebra(const GroupParams& p, int samples, std::uint64_t seed);

struct WalkReport {
  bool ok = true;
  int states = 0;
  int longest_from_origin = 0;
  std::string witness;
};

WalkReport index_walk_check(int p1, int q1, int m);

}  // namespace qdl
