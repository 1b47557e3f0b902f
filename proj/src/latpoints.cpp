#include "qdl/latpoints.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <thread>

#include "qdl/errors.hpp"

namespace qdl {

namespace {

using i128 = __int128;

i128 iabs(i128 x) { return x < 0 ? -x : x; }

// floor(sqrt(n)) for n >= 0.
i128 isqrt(i128 n) {
  if (n < 0) return -1;
  i128 r = static_cast<i128>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::int64_t to_i64(const mpz_class& z, const char* what) {
  if (!z.fits_slong_p()) throw std::overflow_error(std::string(what) + " does not fit in 64 bits");
  return z.get_si();
}

// Q = sum_k w_k L_k(x)^2 / scale with integer linear forms L_k; term k has
// pivot variable piv[k] and involves only variables pivoted at steps >= k.
struct Pivoted {
  bool ok = false;
  std::vector<std::size_t> piv;
  std::vector<std::int64_t> w;                // per term
  std::vector<std::vector<std::int64_t>> c;   // c[k][var]
  std::int64_t scale = 1;
};

Pivoted pivoted_ldl(const IntegralForm& f) {
  const std::size_t d = f.d;
  std::vector<std::vector<mpq_class>> s(d, std::vector<mpq_class>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) s[i][j] = f.at(i, j);
  std::vector<bool> done(d, false);
  std::vector<mpq_class> dk;
  std::vector<std::vector<mpq_class>> mu;
  Pivoted out;
  for (std::size_t k = 0; k < d; ++k) {
    std::size_t p = d;
    for (std::size_t r = 0; r < d; ++r)
      if (!done[r] && sgn(s[r][r]) != 0 && (p == d || abs(s[r][r]) > abs(s[p][p]))) p = r;
    if (p == d) return out;
    done[p] = true;
    out.piv.push_back(p);
    dk.push_back(s[p][p]);
    std::vector<mpq_class> row(d);
    row[p] = 1;
    for (std::size_t j = 0; j < d; ++j)
      if (!done[j]) row[j] = s[p][j] / s[p][p];
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        if (!done[i] && !done[j]) s[i][j] -= s[i][p] * s[p][j] / s[p][p];
    mu.push_back(std::move(row));
  }
  // integer rows and weights
  std::vector<mpz_class> den(d);
  std::vector<mpq_class> wq(d);
  mpz_class n = 1;
  for (std::size_t k = 0; k < d; ++k) {
    den[k] = 1;
    for (const auto& x : mu[k]) den[k] = lcm(den[k], mpz_class(x.get_den()));
    wq[k] = dk[k] / (den[k] * den[k]);
    n = lcm(n, mpz_class(wq[k].get_den()));
  }
  try {
    out.scale = to_i64(n, "scale");
    for (std::size_t k = 0; k < d; ++k) {
      mpq_class wk = wq[k] * n;
      out.w.push_back(to_i64(wk.get_num(), "weight"));
      std::vector<std::int64_t> row(d);
      for (std::size_t j = 0; j < d; ++j) {
        mpq_class cj = mu[k][j] * den[k];
        row[j] = to_i64(cj.get_num(), "coefficient");
      }
      out.c.push_back(std::move(row));
    }
  } catch (const std::overflow_error&) {
    return Pivoted{};
  }
  out.ok = true;
  return out;
}

struct Searcher {
  const IntegralForm& f;
  std::int64_t H;
  std::size_t d;
  std::vector<std::size_t> ord;  // enumeration order
  Pivoted ldl;
  bool use_ldl = false;
  // radius[t][k]: sum of |c_k,j| H over variables j unknown after t fixings
  std::vector<std::vector<i128>> radius;
  i128 scaled_target = 0;

  std::uint64_t budget = 0;
  std::uint64_t nodes = 0;
  bool exhausted = false;
  std::vector<IntVector> found;

  Searcher(const IntegralForm& form, std::int64_t h, const Pivoted& p) : f(form), H(h), d(form.d), ldl(p) {
    if (ldl.ok) {
      ord.assign(ldl.piv.rbegin(), ldl.piv.rend());
      // guard against overflow in w * L^2
      long double worst = 0;
      for (std::size_t k = 0; k < d; ++k) {
        long double r = 0;
        for (auto x : ldl.c[k]) r += std::fabs(static_cast<long double>(x)) * h;
        worst += std::fabs(static_cast<long double>(ldl.w[k])) * r * r;
      }
      use_ldl = worst < 1e36L;
    } else {
      ord.resize(d);
      std::iota(ord.begin(), ord.end(), 0);
    }
    if (use_ldl) {
      radius.assign(d + 1, std::vector<i128>(d, 0));
      for (std::size_t t = 0; t <= d; ++t)
        for (std::size_t k = 0; k < d; ++k)
          for (std::size_t pos = t; pos < d; ++pos) radius[t][k] += iabs(ldl.c[k][ord[pos]]) * H;
      scaled_target = static_cast<i128>(f.target) * ldl.scale;
    }
  }

  struct State {
    IntVector x;
    std::vector<i128> g;        // G x over fixed coordinates
    i128 q = 0;                 // x^T G x over fixed coordinates
    std::vector<i128> partial;  // L_k over fixed coordinates
    i128 known = 0;             // sum of w_k L_k^2 over determined terms
  };

  void fix(State& s, std::size_t t, std::int64_t v) const {
    const std::size_t var = ord[t];
    s.x[var] = v;
    s.q += 2 * static_cast<i128>(v) * s.g[var] + static_cast<i128>(f.at(var, var)) * v * v;
    for (std::size_t j = 0; j < d; ++j) s.g[j] += static_cast<i128>(f.at(j, var)) * v;
    if (use_ldl) {
      for (std::size_t k = 0; k < d; ++k) s.partial[k] += static_cast<i128>(ldl.c[k][var]) * v;
      // term k is determined once its pivot (position d-1-k) is fixed
      const std::size_t k = d - 1 - t;
      s.known += static_cast<i128>(ldl.w[k]) * s.partial[k] * s.partial[k];
    }
  }

  // After t fixings: can the remaining terms still reach the target?
  bool feasible(const State& s, std::size_t t) const {
    if (!use_ldl) return true;
    i128 lo = 0, hi = 0;
    for (std::size_t k = 0; k + t < d; ++k) {
      const i128 p = iabs(s.partial[k]), r = radius[t][k];
      const i128 mx = p + r, mn = p > r ? p - r : 0;
      const i128 w = ldl.w[k];
      if (w > 0) {
        lo += w * mn * mn;
        hi += w * mx * mx;
      } else {
        lo += w * mx * mx;
        hi += w * mn * mn;
      }
    }
    const i128 need = scaled_target - s.known;
    return need >= lo && need <= hi;
  }

  void solve_last(State& s) {
    const std::size_t var = ord[d - 1];
    const i128 a = f.at(var, var), b = s.g[var], c = s.q - f.target;
    // a y^2 + 2 b y + c = 0
    auto take = [&](i128 y) {
      if (y < -H || y > H) return;
      IntVector x = s.x;
      x[var] = static_cast<std::int64_t>(y);
      found.push_back(std::move(x));
    };
    if (a == 0) {
      if (b == 0) {
        if (c == 0)
          for (std::int64_t y = -H; y <= H; ++y) take(y);
        return;
      }
      if ((-c) % (2 * b) == 0) take(-c / (2 * b));
      return;
    }
    const i128 disc = b * b - a * c;
    if (disc < 0) return;
    const i128 r = isqrt(disc);
    if (r * r != disc) return;
    if ((-b - r) % a == 0) take((-b - r) / a);
    if (r != 0 && (-b + r) % a == 0) take((-b + r) / a);
  }

  void descend(State& s, std::size_t t) {
    if (exhausted) return;
    if (t + 1 == d) {
      ++nodes;
      solve_last(s);
      return;
    }
    for (std::int64_t v = -H; v <= H; ++v) {
      if (++nodes > budget) {
        exhausted = true;
        return;
      }
      State next = s;
      fix(next, t, v);
      if (t + 1 < d && !feasible(next, t + 1)) continue;
      descend(next, t + 1);
      if (exhausted) return;
    }
  }

  State root() const {
    State s;
    s.x.assign(d, 0);
    s.g.assign(d, 0);
    s.partial.assign(d, 0);
    return s;
  }
};

}  // namespace

i128 IntegralForm::value(const IntVector& x) const {
  i128 sum = 0;
  for (std::size_t i = 0; i < d; ++i) {
    if (x[i] == 0) continue;
    i128 row = 0;
    for (std::size_t j = 0; j < d; ++j) row += static_cast<i128>(at(i, j)) * x[j];
    sum += row * x[i];
  }
  return sum;
}

IntegralForm integral_form(const QMatrix& gram, const Rational& a) {
  const std::size_t d = gram.rows();
  if (!gram.square() || d == 0) throw DimensionError("gram must be square and non-empty");
  if (!is_symmetric(gram)) throw DimensionError("gram must be symmetric");
  mpz_class l = a.get_den();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      if (!gram(i, j).is_rational()) throw FieldMismatch("lattice enumeration needs a rational gram");
      l = lcm(l, mpz_class(gram(i, j).a().get_den()));
    }
  IntegralForm f;
  f.d = d;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      mpq_class v = gram(i, j).a() * l;
      f.gram.push_back(to_i64(v.get_num(), "gram entry"));
    }
  mpq_class t = a * l;
  f.target = to_i64(t.get_num(), "level");
  return f;
}

std::uint64_t default_node_budget() {
  if (const char* env = std::getenv("QDL_NODE_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return 4'000'000'000ULL;
}

PointSet enumerate_box(const IntegralForm& form, std::int64_t H, std::uint64_t node_budget, unsigned jobs) {
  if (H < 0) throw std::invalid_argument("height bound must be non-negative");
  const Pivoted ldl = pivoted_ldl(form);
  PointSet out;
  out.height = H;
  const std::size_t d = form.d;
  Searcher proto(form, H, ldl);
  out.order = proto.ord;

  if (d == 1) {
    proto.budget = node_budget;
    auto s = proto.root();
    proto.descend(s, 0);
    out.points = std::move(proto.found);
    out.nodes = proto.nodes;
    out.exhaustive = !proto.exhausted;
  } else {
    // one task per value of the outermost variable, fixed budget share each
    const std::size_t tasks = static_cast<std::size_t>(2 * H + 1);
    const std::uint64_t share = std::max<std::uint64_t>(1, node_budget / tasks);
    std::vector<std::vector<IntVector>> results(tasks);
    std::vector<std::uint64_t> counts(tasks, 0);
    std::vector<char> cut(tasks, 0);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t k = next.fetch_add(1);
        if (k >= tasks) return;
        Searcher s(form, H, ldl);
        s.budget = share;
        auto st = s.root();
        s.fix(st, 0, static_cast<std::int64_t>(k) - H);
        s.nodes = 1;
        if (s.feasible(st, 1)) s.descend(st, 1);
        results[k] = std::move(s.found);
        counts[k] = s.nodes;
        cut[k] = s.exhausted;
      }
    };
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, tasks));
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (std::size_t k = 0; k < tasks; ++k) {
      for (auto& x : results[k]) out.points.push_back(std::move(x));
      out.nodes += counts[k];
      if (cut[k]) out.exhaustive = false;
    }
  }
  std::sort(out.points.begin(), out.points.end());
  out.points.erase(std::unique(out.points.begin(), out.points.end()), out.points.end());
  for (const auto& x : out.points)
    if (!form.on_level(x)) throw InvariantBreach("enumerated point off the level set");
  return out;
}

std::int64_t sup_norm(const IntVector& x) {
  std::int64_t m = 0;
  for (auto v : x) m = std::max<std::int64_t>(m, v < 0 ? -v : v);
  return m;
}

IntVector Automorph::apply(const IntVector& x) const {
  const std::size_t d = x.size();
  IntVector y(d);
  for (std::size_t i = 0; i < d; ++i) {
    i128 s = 0;
    for (std::size_t j = 0; j < d; ++j) s += static_cast<i128>(gamma[i * d + j]) * x[j];
    if (s > std::numeric_limits<std::int64_t>::max() || s < std::numeric_limits<std::int64_t>::min())
      throw std::overflow_error("automorph image out of range");
    y[i] = static_cast<std::int64_t>(s);
  }
  return y;
}

bool is_automorph(const IntegralForm& form, const std::vector<std::int64_t>& g) {
  const std::size_t d = form.d;
  if (g.size() != d * d) return false;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      i128 s = 0;
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l)
          s += static_cast<i128>(g[k * d + i]) * form.at(k, l) * g[l * d + j];
      if (s != form.at(i, j)) return false;
    }
  // det = +-1: gamma^T A gamma = A with A non-singular forces det^2 = 1
  return true;
}

namespace {

std::vector<std::int64_t> identity_gamma(std::size_t d) {
  std::vector<std::int64_t> g(d * d, 0);
  for (std::size_t i = 0; i < d; ++i) g[i * d + i] = 1;
  return g;
}

// Vectors in [-r, r]^d whose first non-zero entry is positive.
std::vector<IntVector> small_vectors(std::size_t d, int r) {
  std::vector<IntVector> out;
  IntVector x(d, -r);
  for (;;) {
    auto first = std::find_if(x.begin(), x.end(), [](std::int64_t v) { return v != 0; });
    if (first != x.end() && *first > 0) out.push_back(x);
    std::size_t k = 0;
    while (k < d && x[k] == r) x[k++] = -r;
    if (k == d) break;
    ++x[k];
  }
  return out;
}

// A v
IntVector times(const IntegralForm& f, const IntVector& v) {
  IntVector out(f.d, 0);
  for (std::size_t i = 0; i < f.d; ++i)
    for (std::size_t j = 0; j < f.d; ++j) out[i] += f.at(i, j) * v[j];
  return out;
}

}  // namespace

std::vector<Automorph> find_automorphs(const IntegralForm& form, std::size_t budget) {
  const std::size_t d = form.d;
  std::vector<Automorph> perms, refl, trans;
  std::set<std::vector<std::int64_t>> seen{identity_gamma(d)};
  auto offer = [&](std::vector<Automorph>& bucket, std::vector<std::int64_t> g, const char* kind) {
    if (!is_automorph(form, g) || !seen.insert(g).second) return;
    bucket.push_back({std::move(g), kind});
  };

  // sign flips and transpositions
  for (std::size_t i = 0; i < d; ++i) {
    auto g = identity_gamma(d);
    g[i * d + i] = -1;
    offer(perms, g, "signed_permutation");
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      auto g = identity_gamma(d);
      g[i * d + i] = g[j * d + j] = 0;
      g[i * d + j] = g[j * d + i] = 1;
      offer(perms, g, "signed_permutation");
    }

  const int r = std::pow(5.0, double(d)) <= 1e5 ? 2 : 1;
  const auto vecs = small_vectors(d, r);

  // reflections x -> x - (2 / Q(v)) v (v^T A x)
  for (const auto& v : vecs) {
    if (refl.size() >= budget) break;
    const i128 q = form.value(v);
    if (q == 0) continue;
    const IntVector av = times(form, v);
    std::vector<std::int64_t> g = identity_gamma(d);
    bool integral = true;
    for (std::size_t i = 0; i < d && integral; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        const i128 num = 2 * static_cast<i128>(v[i]) * av[j];
        if (num % q != 0) {
          integral = false;
          break;
        }
        g[i * d + j] -= static_cast<std::int64_t>(num / q);
      }
    if (integral) offer(refl, g, "reflection");
  }

  // Eichler transvections exp(f e^T A - e f^T A) along isotropic e
  for (const auto& e : vecs) {
    if (trans.size() >= budget) break;
    if (form.value(e) != 0) continue;
    const IntVector ae = times(form, e);
    for (const auto& f0 : vecs) {
      if (trans.size() >= budget) break;
      i128 bef = 0;
      for (std::size_t i = 0; i < d; ++i) bef += static_cast<i128>(ae[i]) * f0[i];
      if (bef != 0) continue;
      bool parallel = true;
      for (std::size_t i = 0; i < d && parallel; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
          if (static_cast<i128>(e[i]) * f0[j] != static_cast<i128>(e[j]) * f0[i]) parallel = false;
      if (parallel) continue;
      for (int k : {1, 2}) {
        IntVector f = f0;
        for (auto& x : f) x *= k;
        const IntVector af = times(form, f);
        const i128 qf = form.value(f);
        if (qf % 2 != 0) continue;
        std::vector<std::int64_t> g = identity_gamma(d);
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t j = 0; j < d; ++j)
            g[i * d + j] += f[i] * ae[j] - e[i] * af[j] - static_cast<std::int64_t>(qf / 2) * e[i] * ae[j];
        const std::size_t before = trans.size();
        offer(trans, g, "transvection");
        if (trans.size() > before) break;
      }
    }
  }

  // interleave the three kinds up to the budget
  std::vector<Automorph> out;
  const std::vector<Automorph>* buckets[3] = {&perms, &refl, &trans};
  for (std::size_t k = 0; out.size() < budget; ++k) {
    bool any = false;
    for (auto* b : buckets)
      if (k < b->size() && out.size() < budget) {
        out.push_back((*b)[k]);
        any = true;
      }
    if (!any) break;
  }
  return out;
}

PointSet orbit_expand(const IntegralForm& form, const PointSet& seed, const std::vector<Automorph>& autos,
                      std::int64_t H_out, std::size_t cap) {
  PointSet out;
  out.height = H_out;
  out.exhaustive = false;
  std::set<IntVector> seen;
  std::vector<IntVector> queue;
  for (const auto& x : seed.points) {
    if (seen.size() >= cap) break;
    if (sup_norm(x) <= H_out && form.on_level(x) && seen.insert(x).second) queue.push_back(x);
  }
  for (std::size_t head = 0; head < queue.size() && seen.size() < cap; ++head) {
    const IntVector x = queue[head];
    for (const auto& a : autos) {
      if (seen.size() >= cap) break;
      IntVector y;
      try {
        y = a.apply(x);
      } catch (const std::overflow_error&) {
        continue;
      }
      if (sup_norm(y) > H_out || seen.count(y)) continue;
      if (!form.on_level(y)) throw InvariantBreach("automorph moved a point off the level set");
      seen.insert(y);
      queue.push_back(std::move(y));
    }
  }
  out.points.assign(seen.begin(), seen.end());
  return out;
}

}  // namespace qdl
