// Acceptance run: one PASS/FAIL line per criterion.
// Exit status is 0 iff the set of failing criteria equals --known-failures
// (empty by default).

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "qdl/canon.hpp"
#include "qdl/density.hpp"
#include "qdl/errors.hpp"
#include "qdl/latpoints.hpp"
#include "qdl/quadforms.hpp"
#include "qdl/symalg.hpp"

using namespace qdl;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

QMatrix diag(std::vector<long> v) {
  QMatrix m(v.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i) m(i, i) = v[i];
  return m;
}

Rational small_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> den(1, 3);
  const int q = den(rng);
  std::uniform_int_distribution<int> num(-5 * q, 5 * q);
  Rational x(num(rng), q);
  x.canonicalize();
  return x;
}

// ---- 1 and 2: reduction corpus ------------------------------------------------

struct Pair {
  QuadraticForm q;
  LinearMap m;
};

std::vector<Pair> reduction_corpus(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Pair> out;
  while (out.size() < count) {
    const int s = 1 + static_cast<int>(out.size() % 3);
    const int d = std::uniform_int_distribution<int>(s + 2, 8)(rng);
    QMatrix a(d, d), m(s, d);
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) a(i, j) = a(j, i) = QuadScalar(small_rational(rng));
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = QuadScalar(small_rational(rng));
    QuadraticForm q(a);
    LinearMap lm(m);
    if (signature(q).rank() != d || rank(m) != static_cast<std::size_t>(s)) continue;
    const Signature rs = signature(restrict(q, kernel_basis(lm)));
    if (rs.p < 1 || rs.q < 1) continue;
    out.push_back({std::move(q), std::move(lm)});
  }
  return out;
}

Outcome criterion_1(const std::vector<Pair>& corpus, std::vector<CanonicalCertificate>& certs) {
  const auto t0 = Clock::now();
  std::size_t ok = 0;
  for (const auto& p : corpus) {
    try {
      certs.push_back(reduce_pair(p.q, p.m));
      ok += verify_certificate(p.q, p.m, certs.back());
    } catch (const std::exception& e) {
      certs.emplace_back();
    }
  }
  const double t = seconds_since(t0);
  std::ostringstream os;
  os << ok << "/" << corpus.size() << " certificates verified exactly in " << t << " s";
  return {ok == corpus.size() && t < 60, os.str()};
}

Outcome criterion_2(const std::vector<Pair>& corpus, const std::vector<CanonicalCertificate>& certs) {
  std::size_t ok = 0;
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    const auto& q = corpus[k].q;
    const auto& m = corpus[k].m;
    const auto& p = certs[k].params;
    if (certs[k].g_d.rows() == 0) continue;
    const int d = static_cast<int>(q.dim()), s = static_cast<int>(m.s());
    const int rk = signature(restrict(q, kernel_basis(m))).rank();
    const Signature sig = signature(q);
    if (p.m == d - s - rk && p.r >= 1 && p.n >= 1 && sig.p == p.p1 + p.m + p.r && sig.q == p.q1 + p.m + p.n) ++ok;
  }
  return {ok == corpus.size(), std::to_string(ok) + "/" + std::to_string(corpus.size()) + " satisfy the parameter law"};
}

// ---- 3: algebra identities ----------------------------------------------------

Outcome criterion_3() {
  const auto t0 = Clock::now();
  std::size_t sets = 0, checks = 0, failed = 0, info = 0, sigma0 = 0;
  std::string first;
  for (int p1 = 0; p1 <= 2; ++p1)
    for (int q1 = 0; q1 <= 2; ++q1)
      for (int m = 0; m <= 2; ++m)
        for (auto [r, n] : {std::pair{1, 2}, std::pair{2, 1}}) {
          const GroupParams base{p1, q1, m, r, n, 0, 0, 0};
          if (base.d() > 10) continue;
          for (int i1 = 0; i1 <= p1; ++i1)
            for (int i2 = 0; i2 <= q1; ++i2)
              for (int i3 = -std::min(p1, q1); i3 <= m; ++i3) {
                const auto p = base.shifted(i1, i2, i3);
                if (!p.valid()) continue;
                ++sets;
                const auto card = verify_algebra(p, 50, 1000 + sets);
                for (const auto& c : card.checks) {
                  if (c.informational) {
                    (c.name == "bracket.u_minus_u_minus_sigma0" ? sigma0 : info) += !c.pass;
                    continue;
                  }
                  ++checks;
                  if (!c.pass) {
                    ++failed;
                    if (first.empty()) first = p.str() + " " + c.name + " " + c.witness;
                  }
                }
              }
        }
  const double t = seconds_since(t0);
  std::ostringstream os;
  os << sets << " parameter sets, " << checks << " identity checks, " << failed << " failures, " << t << " s";
  if (info) os << "; informational: " << info << " x [u_l+,u_l-] has a d component";
  if (sigma0) os << "; informational: " << sigma0 << " x [u-,u-] != b- at sigma = 0 (u- = 0, index unreachable from i = 0)";
  if (!first.empty()) os << "; first failure: " << first;
  return {failed == 0 && t < 120, os.str()};
}

// ---- 4: fixed forms -----------------------------------------------------------

std::vector<RatMatrix> mats(const std::vector<GroupElement>& g) {
  std::vector<RatMatrix> out;
  for (const auto& x : g) out.push_back(x.mat);
  return out;
}

Outcome criterion_4() {
  std::mt19937_64 rng(44);
  std::vector<GroupParams> sets;
  for (int p1 = 0; p1 <= 2 && sets.size() < 20; ++p1)
    for (int q1 = 0; q1 <= 2 && sets.size() < 20; ++q1)
      for (int m = 0; m <= 2 && sets.size() < 20; ++m) {
        const int r = 1 + (p1 + m) % 2, n = 3 - r + (q1 % 2);
        const GroupParams p{p1, q1, m, r, n, 0, 0, 0};
        if (p.s() >= 1 && p.d() <= 10) sets.push_back(p);
      }
  std::size_t fixed_ok = 0, transport_ok = 0;
  std::uniform_int_distribution<int> coef(-3, 3);
  for (const auto& p : sets) {
    const std::size_t d = p.d(), s = p.s();
    const auto gens = mats(build_H_generators(p));
    RatMatrix lead(d, s);
    for (std::size_t k = 0; k < s; ++k) lead(k, k) = 1;
    fixed_ok += same_column_span(fixed_forms(gens, d), lead);

    // random certificate: Q = g_d^T Q0 g_d, M = g_s M0 g_d
    CanonicalParams cp;
    cp.m = p.m;
    cp.p1 = p.p1;
    cp.q1 = p.q1;
    cp.r = p.r;
    cp.n = p.n;
    cp.middle = convert<QuadScalar>(signature_matrix(p.p1, p.q1));
    if (!(canonical_gram(cp) == build_Q0(p, cp.middle))) continue;
    RatMatrix gd, gs;
    do {
      gd = RatMatrix(d, d);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) gd(i, j) = coef(rng);
    } while (rank(gd) != d);
    do {
      gs = RatMatrix(s, s);
      for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j) gs(i, j) = coef(rng);
    } while (rank(gs) != s);
    const QMatrix gdq = convert<QuadScalar>(gd), gsq = convert<QuadScalar>(gs);
    const QuadraticForm q(gdq.transpose() * canonical_gram(cp) * gdq);
    const RatMatrix mrat = gs * lead.transpose() * gd;
    const LinearMap m(convert<QuadScalar>(mrat));
    CanonicalCertificate cert;
    cert.g_d = ScaledMatrix(gdq);
    cert.g_s = ScaledMatrix(gsq);
    cert.params = cp;
    if (!verify_certificate(q, m, cert)) continue;
    const RatMatrix gdi = inverse(gd);
    std::vector<RatMatrix> conj;
    for (const auto& g : gens) conj.push_back(gdi * g * gd);
    transport_ok += same_column_span(fixed_forms(conj, d), mrat.transpose());
  }
  std::ostringstream os;
  os << fixed_ok << "/" << sets.size() << " fixed spaces equal span{x_1..x_s}; " << transport_ok << "/" << sets.size()
     << " transported fixed spaces equal the row span of M";
  return {sets.size() == 20 && fixed_ok == 20 && transport_ok == 20, os.str()};
}

// ---- 5: index walk ---------------------------------------------------------------

Outcome criterion_5() {
  const auto t0 = Clock::now();
  std::size_t total = 0, ok = 0;
  for (int p1 = 0; p1 <= 6; ++p1)
    for (int q1 = 0; p1 + q1 <= 6; ++q1)
      for (int m = 0; p1 + q1 + m <= 6; ++m) {
        ++total;
        const auto w = index_walk_check(p1, q1, m);
        ok += w.ok && w.longest_from_origin == p1 + q1 + m;
      }
  const double t = seconds_since(t0);
  std::ostringstream os;
  os << ok << "/" << total << " triples terminate with longest path p'+q'+m, " << t << " s";
  return {ok == total && t < 1, os.str()};
}

// ---- 6: enumeration oracle -----------------------------------------------------

std::vector<IntVector> naive_scan(const IntegralForm& f, std::int64_t H) {
  std::vector<IntVector> out;
  IntVector x(f.d, -H);
  for (;;) {
    if (f.on_level(x)) out.push_back(x);
    std::size_t k = f.d;
    while (k > 0 && x[k - 1] == H) x[--k] = -H;
    if (k == 0) break;
    ++x[k - 1];
  }
  return out;
}

Outcome criterion_6() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(66);
  std::uniform_int_distribution<int> coef(-5, 5), dim(2, 4), height(1, 12), level(-10, 10);
  std::size_t ok = 0;
  for (int k = 0; k < 20; ++k) {
    const int d = dim(rng);
    QMatrix g(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) g(i, j) = g(j, i) = coef(rng);
    const auto f = integral_form(g, level(rng));
    const std::int64_t H = height(rng);
    const auto ps = enumerate_box(f, H);
    ok += ps.exhaustive && ps.points == naive_scan(f, H);
  }
  const double t = seconds_since(t0);
  std::ostringstream os;
  os << ok << "/20 forms match the naive scan, " << t << " s";
  return {ok == 20 && t < 30, os.str()};
}

// ---- 7, 8, 9: density ------------------------------------------------------------

ExperimentSpec flagship_spec() {
  ExperimentSpec e;
  e.Q = diag({1, 1, 1, -1, -1});
  e.M = QMatrix(1, 5);
  e.M(0, 0) = 1;
  e.M(0, 1) = QuadScalar::root(2);
  e.a = 0;
  e.lo = -5;
  e.hi = 5;
  e.step = 0.25;
  e.eps = 0.25;
  e.heights = {10, 20, 40, 60};
  return e;
}

Outcome criterion_7() {
  const auto t0 = Clock::now();
  const auto r = run_experiment(flagship_spec());
  const double t = seconds_since(t0);
  bool increasing = true;
  std::ostringstream os;
  os << "coverage";
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    os << " H=" << r.rows[k].H << ":" << r.rows[k].hits << "/" << r.rows[k].targets;
    if (k && !(r.rows[k].coverage > r.rows[k - 1].coverage)) increasing = false;
  }
  const bool high = r.rows.back().coverage >= 0.9;
  // regression value pinned from the naive-scan oracle: 41/41 from H = 3 on
  const bool pinned = r.rows.back().hits == 41;
  os << "; >= 0.9 at H=60: " << (high ? "yes" : "no") << "; strictly increasing: " << (increasing ? "yes" : "no")
     << " (saturated at 41/41 already at H=10)" << "; " << t << " s";
  return {increasing && high && pinned && t < 300, os.str()};
}

Outcome criterion_8() {
  ExperimentSpec e = flagship_spec();
  e.M = QMatrix(1, 5);
  e.M(0, 0) = 1;
  const auto r = run_experiment(e);
  bool ok = true;
  std::ostringstream os;
  os << "rational M = x1:";
  for (const auto& row : r.rows) {
    os << " H=" << row.H << ":" << row.hits << "/" << row.targets;
    ok = ok && row.hits == 11 && row.targets == 41;
  }
  os << " (expected 11/41: the integers in [-5,5]; the stated 21/41 does not match that count)";
  return {ok, os.str()};
}

Outcome criterion_9() {
  ExperimentSpec e = flagship_spec();
  e.heights = {5, 10, 15};
  e.source = "box+orbit";
  e.orbit_cap = 20000;
  e.jobs = 1;
  const auto a = run_experiment(e);
  e.jobs = 4;
  const auto b = run_experiment(e);
  const auto c = run_experiment(e);
  const bool same = to_json(a).dump() == to_json(b).dump() && to_json(b).dump() == to_json(c).dump() &&
                    to_csv(a) == to_csv(b) && to_csv(b) == to_csv(c);
  const auto card1 = verify_algebra(GroupParams{1, 1, 1, 1, 2, 0, 0, 0}, 20, 9);
  const auto card2 = verify_algebra(GroupParams{1, 1, 1, 1, 2, 0, 0, 0}, 20, 9);
  bool cards = card1.checks.size() == card2.checks.size();
  for (std::size_t k = 0; cards && k < card1.checks.size(); ++k)
    cards = card1.checks[k].pass == card2.checks[k].pass && card1.checks[k].witness == card2.checks[k].witness;
  return {same && cards, std::string("JSON/CSV reports ") + (same ? "byte-identical" : "differ") +
                             " across 3 runs (1 and 4 workers); scorecards " + (cards ? "identical" : "differ")};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known;
  for (int k = 1; k < argc; ++k) {
    const std::string a = argv[k];
    if (a == "--known-failures" && k + 1 < argc) {
      std::stringstream ss(argv[++k]);
      for (std::string item; std::getline(ss, item, ',');) known.insert(std::stoi(item));
    } else {
      std::cerr << "usage: acceptance [--known-failures n,m,...]\n";
      return 64;
    }
  }

  std::set<int> failed;
  auto report = [&](int n, const std::string& title, const std::function<Outcome()>& run) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) failed.insert(n);
    std::printf("[%s] %d. %s: %s\n", o.pass ? "PASS" : "FAIL", n, title.c_str(), o.detail.c_str());
    std::fflush(stdout);
  };

  const auto corpus = reduction_corpus(200, 2024);
  std::vector<CanonicalCertificate> certs;
  report(1, "canonical reduction round trip", [&] { return criterion_1(corpus, certs); });
  report(2, "parameter law", [&] { return criterion_2(corpus, certs); });
  report(3, "algebra identity suite", criterion_3);
  report(4, "fixed forms", criterion_4);
  report(5, "index walk termination", criterion_5);
  report(6, "enumeration oracle equivalence", criterion_6);
  report(7, "flagship density", criterion_7);
  report(8, "negative control", criterion_8);
  report(9, "determinism", criterion_9);

  std::printf("%zu of 9 criteria pass\n", 9 - failed.size());
  if (!known.empty()) {
    std::printf("known failures:");
    for (int k : known) std::printf(" %d", k);
    std::printf(" (%s)\n", failed == known ? "matched" : "NOT matched");
  }
  return failed == known ? 0 : 1;
}
