// qdl: analyze, reduce, verify-algebra, enumerate, density.
// Exit codes: 0 success, 2 hypothesis failure, 64 usage/parse error, 70 internal invariant breach.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qdl/canon.hpp"
#include "qdl/density.hpp"
#include "qdl/errors.hpp"
#include "qdl/latpoints.hpp"
#include "qdl/problem.hpp"
#include "qdl/quadforms.hpp"
#include "qdl/symalg.hpp"

using namespace qdl;
using nlohmann::json;

namespace {

constexpr int kOk = 0, kHypothesis = 2, kUsage = 64, kInternal = 70;

struct Common {
  std::uint64_t seed = 0;
  unsigned jobs = 0;
  std::string out;
  std::string format = "text";
};

void add_common(CLI::App* cmd, Common& c, const std::string& default_format) {
  c.format = default_format;
  cmd->add_option("--seed", c.seed, "random seed");
  cmd->add_option("--jobs", c.jobs, "worker threads (0 = all cores)");
  cmd->add_option("--out", c.out, "output file (default stdout)");
  cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "csv", "text"}));
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw ParseError("cannot write " + c.out);
  f << text;
}

json matrix_json(const QMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(scalar_to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

json matrix_json(const RatMatrix& m) { return matrix_json(convert<QuadScalar>(m)); }

json scaled_json(const ScaledMatrix& m) {
  json l = json::array(), r = json::array();
  for (const auto& x : m.left_roots()) l.push_back(scalar_to_json(x));
  for (const auto& x : m.right_roots()) r.push_back(scalar_to_json(x));
  return {{"left_roots", l}, {"core", matrix_json(m.core())}, {"right_roots", r}};
}

std::string text_of_matrix(const QMatrix& m) {
  std::ostringstream os;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << "    [";
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << to_string(m(i, j));
    os << "]\n";
  }
  return os.str();
}

// ---- analyze ----------------------------------------------------------------

json level_set_probe(const Problem& p, std::int64_t H) {
  json j{{"H", H}};
  try {
    const auto ps = enumerate_box(integral_form(p.Q, p.a), H, 50'000'000);
    j["points"] = ps.points.size();
    j["exhaustive"] = ps.exhaustive;
    j["note"] = ps.points.size() >= 2 ? "at least two points found" : "hypothesis unverified at scale H";
  } catch (const FieldMismatch&) {
    j["note"] = "irrational gram: level set not enumerated";
  }
  return j;
}

int cmd_analyze(const std::string& path, const Common& c) {
  const Problem p = load_problem(path);
  const auto r = check_conditions(QuadraticForm(p.Q), LinearMap(p.M), p.float_entries);
  const json probe = level_set_probe(p, 3);
  if (c.format == "json") {
    json j{{"d", r.d},
           {"s", r.s},
           {"dim_ok", r.dim_ok},
           {"rank_restricted", r.rank_restricted},
           {"rank_ok", r.rank_ok},
           {"restricted_signature", {r.restricted_signature.p, r.restricted_signature.q}},
           {"indefinite_restricted", r.indefinite_restricted},
           {"irrationality_ok", r.irrationality_ok},
           {"irrationality_decidable", r.irrationality_decidable},
           {"nondegenerate", r.nondegenerate},
           {"overall", r.overall},
           {"kernel", matrix_json(r.kernel)},
           {"rational_kernel", matrix_json(r.rational_kernel)},
           {"level_set", probe}};
    emit(c, j.dump(2) + "\n");
  } else {
    std::ostringstream os;
    auto line = [&](const std::string& name, bool ok, const std::string& evidence) {
      os << (ok ? "PASS " : "FAIL ") << name << ": " << evidence << "\n";
    };
    os << "problem " << path << " (d=" << r.d << ", s=" << r.s << ")\n";
    line("dimension", r.dim_ok, "d=" + std::to_string(r.d) + " > 2s=" + std::to_string(2 * r.s));
    line("rank of Q on ker M", r.rank_ok, "rank " + std::to_string(r.rank_restricted));
    line("Q on ker M indefinite", r.indefinite_restricted,
         "signature (" + std::to_string(r.restricted_signature.p) + "," + std::to_string(r.restricted_signature.q) + ")");
    if (!r.irrationality_decidable)
      os << "UNDECIDABLE irrationality: M given at float precision, condition not certified\n";
    else
      line("no rational form vanishing on ker M", r.irrationality_ok,
           std::to_string(r.rational_kernel.cols()) + " rational witness(es)");
    const Signature sig = signature(p.Q);
    line("Q non-degenerate", r.nondegenerate,
         "signature (" + std::to_string(sig.p) + "," + std::to_string(sig.q) + ")");
    os << "kernel basis (columns):\n" << text_of_matrix(r.kernel);
    os << "level set probe: " << probe.dump() << "\n";
    os << "overall: " << (r.overall ? "PASS" : "FAIL") << "\n";
    emit(c, os.str());
  }
  return r.overall ? kOk : kHypothesis;
}

// ---- reduce -----------------------------------------------------------------

int cmd_reduce(const std::string& path, const Common& c) {
  const Problem p = load_problem(path);
  const QuadraticForm q(p.Q);
  const LinearMap m(p.M);
  CanonicalCertificate cert;
  std::string tag;
  if (p.s == 1) {
    auto single = reduce_single(q, m);
    cert = std::move(single.cert);
    tag = to_string(single.tag);
  } else {
    cert = reduce_pair(q, m);
  }
  const bool verified = verify_certificate(q, m, cert);
  const auto& k = cert.params;
  json j{{"params", {{"m", k.m}, {"p1", k.p1}, {"q1", k.q1}, {"r", k.r}, {"n", k.n}}},
         {"middle", matrix_json(k.middle)},
         {"layout", cert.layout == Layout::pair ? "pair" : "single_1b"},
         {"g_d", scaled_json(cert.g_d)},
         {"g_s", scaled_json(cert.g_s)},
         {"verified", verified}};
  if (!tag.empty()) j["case"] = tag;
  if (c.format == "text") {
    std::ostringstream os;
    os << "m=" << k.m << " p'=" << k.p1 << " q'=" << k.q1 << " r=" << k.r << " n=" << k.n;
    if (!tag.empty()) os << " case=" << tag;
    os << "\nQ0:\n" << text_of_matrix(canonical_gram(k, cert.layout)) << "verified=" << (verified ? "true" : "false")
       << "\n";
    emit(c, os.str());
  } else {
    emit(c, j.dump(2) + "\n");
  }
  if (!verified) throw InvariantBreach("certificate failed exact verification");
  return kOk;
}

// ---- verify-algebra -----------------------------------------------------------

int cmd_verify_algebra(const std::string& params, int samples, int r, int n, const Common& c) {
  std::vector<int> v;
  std::stringstream ss(params);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      v.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ParseError("--params: \"" + item + "\" is not an integer");
    }
  }
  if (v.size() != 3 && v.size() != 6) throw ParseError("--params expects p',q',m or p',q',m,i1,i2,i3");
  if (v[0] < 0 || v[1] < 0 || v[2] < 0) throw ParseError("--params: p', q', m must be non-negative");
  GroupParams base{v[0], v[1], v[2], r, n, 0, 0, 0};
  std::vector<GroupParams> all;
  if (v.size() == 6) {
    base = base.shifted(v[3], v[4], v[5]);
    if (!base.valid()) throw ParseError("--params: index out of range for " + base.str());
    all.push_back(base);
  } else {
    for (int i1 = 0; i1 <= base.p1; ++i1)
      for (int i2 = 0; i2 <= base.q1; ++i2)
        for (int i3 = -std::min(base.p1, base.q1); i3 <= base.m; ++i3)
          if (base.shifted(i1, i2, i3).valid()) all.push_back(base.shifted(i1, i2, i3));
  }
  json cards = json::array();
  bool ok = true;
  std::ostringstream text;
  for (const auto& p : all) {
    const auto card = verify_algebra(p, samples, c.seed);
    json checks = json::array();
    for (const auto& x : card.checks) {
      checks.push_back({{"name", x.name}, {"pass", x.pass}, {"informational", x.informational}, {"witness", x.witness}});
      text << (x.pass ? "PASS " : x.informational ? "INFO " : "FAIL ") << p.str() << " " << x.name
           << (x.witness.empty() ? "" : " (" + x.witness + ")") << "\n";
    }
    ok = ok && card.all_pass();
    cards.push_back({{"params", p.str()}, {"i", {p.i1, p.i2, p.i3}}, {"all_pass", card.all_pass()}, {"checks", checks}});
  }
  const auto walk = index_walk_check(base.p1, base.q1, base.m);
  ok = ok && walk.ok;
  text << (walk.ok ? "PASS " : "FAIL ") << "index walk: " << walk.states << " states, longest path "
       << walk.longest_from_origin << "\n";
  json j{{"p1", base.p1}, {"q1", base.q1}, {"m", base.m}, {"r", r}, {"n", n}, {"samples", samples}, {"seed", c.seed},
         {"scorecards", cards},
         {"index_walk", {{"ok", walk.ok}, {"states", walk.states}, {"longest", walk.longest_from_origin}, {"witness", walk.witness}}},
         {"all_pass", ok}};
  emit(c, c.format == "text" ? text.str() : j.dump(2) + "\n");
  return ok ? kOk : kInternal;
}

// ---- enumerate ------------------------------------------------------------------

int cmd_enumerate(const std::string& path, std::int64_t H, bool orbit, std::size_t budget, std::size_t cap,
                  const Common& c) {
  const Problem p = load_problem(path);
  const IntegralForm form = integral_form(p.Q, p.a);
  PointSet ps = enumerate_box(form, H, default_node_budget(), c.jobs);
  std::size_t autos_used = 0;
  if (orbit) {
    const auto autos = find_automorphs(form, budget);
    autos_used = autos.size();
    const auto more = orbit_expand(form, ps, autos, H, cap);
    std::vector<IntVector> merged;
    std::set_union(ps.points.begin(), ps.points.end(), more.points.begin(), more.points.end(),
                   std::back_inserter(merged));
    ps.points = std::move(merged);
  }
  std::ostringstream os;
  if (c.format == "csv")
    for (const auto& x : ps.points) {
      for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
      os << "\n";
    }
  else
    for (const auto& x : ps.points) os << json(x).dump() << "\n";
  json summary{{"count", ps.points.size()}, {"H", H}, {"exhaustive", ps.exhaustive}, {"nodes", ps.nodes},
               {"variable_order", ps.order}};
  if (orbit) summary["automorphs"] = autos_used;
  if (ps.points.size() < 2) summary["note"] = "hypothesis unverified at scale H";
  if (c.format != "csv") os << json{{"summary", summary}}.dump() << "\n";
  emit(c, os.str());
  if (c.format == "csv") std::cerr << summary.dump() << "\n";
  return kOk;
}

// ---- density ---------------------------------------------------------------------

int cmd_density(const std::string& path, const std::string& csv, const Common& c) {
  const Problem p = load_problem(path);
  ExperimentSpec spec = experiment_of(p);
  spec.jobs = c.jobs;
  spec.seed = c.seed;
  const auto report = run_experiment(spec);
  const std::string js = to_json(report).dump(2) + "\n", cs = to_csv(report);
  if (!csv.empty()) {
    std::ofstream f(csv, std::ios::binary);
    if (!f) throw ParseError("cannot write " + csv);
    f << cs;
  }
  if (!c.out.empty()) {
    emit(c, js);
  } else if (csv.empty() || c.format == "json") {
    std::cout << (c.format == "json" ? js : cs);
  }
  if (report.status != "ok") std::cerr << "warning: hypotheses violated; report produced anyway\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qdl: values of quadratic forms at integer points on a level set"};
  app.require_subcommand(1);

  Common ca, cr, cv, ce, cd;
  std::string analyze_path, reduce_path, enum_path, spec_path, csv_path;
  auto* analyze = app.add_subcommand("analyze", "check the hypotheses of the density theorem");
  analyze->add_option("path", analyze_path, "problem file")->required();
  add_common(analyze, ca, "text");

  auto* reduce = app.add_subcommand("reduce", "reduce (Q, M) to canonical form with a certificate");
  reduce->add_option("path", reduce_path, "problem file")->required();
  add_common(reduce, cr, "json");

  std::string params;
  int samples = 100, r = 1, n = 2;
  auto* verify = app.add_subcommand("verify-algebra", "check the Lie-algebra and group identities");
  verify->add_option("--params", params, "p',q',m[,i1,i2,i3]")->required();
  verify->add_option("--samples", samples, "random samples per identity")->check(CLI::NonNegativeNumber);
  verify->add_option("--r", r, "positive sigma size at i = 0")->check(CLI::NonNegativeNumber);
  verify->add_option("--n", n, "negative sigma size at i = 0")->check(CLI::NonNegativeNumber);
  add_common(verify, cv, "json");

  std::int64_t H = 10;
  bool orbit = false;
  std::size_t budget = 64, cap = 100000;
  auto* enumerate = app.add_subcommand("enumerate", "integer points on the level set in a box");
  enumerate->add_option("path", enum_path, "problem file")->required();
  enumerate->add_option("--H", H, "sup-norm height bound")->check(CLI::NonNegativeNumber);
  enumerate->add_flag("--orbit", orbit, "expand by integral automorphs");
  enumerate->add_option("--budget", budget, "number of automorphs to search for");
  enumerate->add_option("--cap", cap, "maximum orbit size");
  add_common(enumerate, ce, "json");

  auto* density = app.add_subcommand("density", "coverage experiment");
  density->add_option("--spec", spec_path, "problem file with an experiment block")->required();
  density->add_option("--csv", csv_path, "write the coverage CSV here");
  add_common(density, cd, "csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*analyze) return cmd_analyze(analyze_path, ca);
    if (*reduce) return cmd_reduce(reduce_path, cr);
    if (*verify) return cmd_verify_algebra(params, samples, r, n, cv);
    if (*enumerate) return cmd_enumerate(enum_path, H, orbit, budget, cap, ce);
    if (*density) return cmd_density(spec_path, csv_path, cd);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const HypothesisError& e) {
    std::cerr << "hypothesis failed (" << e.condition() << "): " << e.what() << "\n";
    return kHypothesis;
  } catch (const InvariantBreach& e) {
    std::cerr << "internal invariant breach: " << e.what() << "\n";
    return kInternal;
  } catch (const DimensionError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const FieldMismatch& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
