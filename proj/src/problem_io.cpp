#include "qdl/problem.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "qdl/errors.hpp"
#include "qdl/scaled_matrix.hpp"

namespace qdl {

namespace {

using nlohmann::json;

Rational parse_part(const json& j, const std::string& field) {
  if (j.is_number_integer()) return Rational(mpz_class(j.dump(), 10));
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const ParseError& e) {
      throw ParseError(field + ": " + e.what());
    }
  }
  throw ParseError(field + ": expected an integer or a \"p/q\" string");
}

const json& member(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::size_t size_field(const json& j, const char* key) {
  const json& v = member(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 1) throw ParseError(std::string(key) + ": expected a positive integer");
  return v.get<std::size_t>();
}

QMatrix parse_matrix(const json& j, const std::string& name, std::size_t rows, std::size_t cols, std::int64_t D,
                     bool allow_float, bool& saw_float) {
  if (!j.is_array() || j.size() != rows)
    throw ParseError(name + ": expected " + std::to_string(rows) + " rows");
  QMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string rname = name + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != cols)
      throw ParseError(rname + ": expected " + std::to_string(cols) + " entries");
    for (std::size_t k = 0; k < cols; ++k) {
      const json& x = j[i][k];
      const std::string field = rname + "[" + std::to_string(k) + "]";
      if (x.is_number_float()) {
        if (!allow_float) throw ParseError(field + ": floating-point entries are only accepted in M");
        const double v = x.get<double>();
        if (!std::isfinite(v)) throw ParseError(field + ": non-finite number");
        m(i, k) = QuadScalar(Rational(v));
        saw_float = true;
      } else {
        m(i, k) = parse_scalar(x, field, D);
      }
    }
  }
  return m;
}

}  // namespace

QuadScalar parse_scalar(const json& j, const std::string& field, std::int64_t sqrtD) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items())
      if (k != "a" && k != "b" && k != "sqrt") throw ParseError(field + ": unknown key \"" + k + "\"");
    const Rational a = j.contains("a") ? parse_part(j["a"], field + ".a") : Rational(0);
    const Rational b = j.contains("b") ? parse_part(j["b"], field + ".b") : Rational(0);
    if (!j.contains("sqrt") || !j["sqrt"].is_number_integer()) throw ParseError(field + ": missing integer \"sqrt\"");
    const std::int64_t D = j["sqrt"].get<std::int64_t>();
    if (sqrtD != 0 && D != sqrtD)
      throw ParseError(field + ": sqrt " + std::to_string(D) + " differs from sqrtD " + std::to_string(sqrtD));
    try {
      return QuadScalar(a, b, D);
    } catch (const std::invalid_argument& e) {
      throw ParseError(field + ": " + e.what());
    }
  }
  return QuadScalar(parse_part(j, field));
}

json scalar_to_json(const QuadScalar& x) {
  if (x.is_rational()) return to_string(x.a());
  return json{{"a", to_string(x.a())}, {"b", to_string(x.b())}, {"sqrt", x.radicand()}};
}

Problem parse_problem(const json& j) {
  if (!j.is_object()) throw ParseError("problem must be a JSON object");
  Problem p;
  if (j.contains("version")) {
    if (!j["version"].is_number_integer() || j["version"].get<int>() != 1)
      throw ParseError("version: only version 1 is supported");
  }
  p.d = size_field(j, "d");
  p.s = size_field(j, "s");
  if (j.contains("sqrtD") && !j["sqrtD"].is_null()) {
    if (!j["sqrtD"].is_number_integer()) throw ParseError("sqrtD: expected an integer or null");
    p.sqrtD = j["sqrtD"].get<std::int64_t>();
    if (!is_squarefree(p.sqrtD)) throw ParseError("sqrtD: " + std::to_string(p.sqrtD) + " is not squarefree >= 2");
  }
  bool saw = false;
  p.Q = parse_matrix(member(j, "Q"), "Q", p.d, p.d, p.sqrtD, false, saw);
  if (!is_symmetric(p.Q)) throw ParseError("Q: gram matrix is not symmetric");
  p.M = parse_matrix(member(j, "M"), "M", p.s, p.d, p.sqrtD, true, p.float_entries);
  const QuadScalar a = parse_scalar(member(j, "a"), "a", p.sqrtD);
  if (!a.is_rational()) throw ParseError("a: level must be rational");
  p.a = a.a();
  try {
    const std::int64_t D = field_of(p.M, field_of(p.Q, p.sqrtD));
    if (p.sqrtD == 0) p.sqrtD = D;
  } catch (const FieldMismatch& e) {
    throw ParseError(std::string("entries from different fields: ") + e.what());
  }
  if (j.contains("experiment")) {
    if (!j["experiment"].is_object()) throw ParseError("experiment: expected an object");
    p.experiment = j["experiment"];
  }
  return p;
}

Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": invalid JSON");
  }
  try {
    return parse_problem(j);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

json problem_to_json(const Problem& p) {
  auto mat = [](const QMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(scalar_to_json(m(i, k)));
      rows.push_back(row);
    }
    return rows;
  };
  json j{{"version", p.version}, {"d", p.d},     {"s", p.s}, {"sqrtD", p.sqrtD ? json(p.sqrtD) : json(nullptr)},
         {"Q", mat(p.Q)},        {"M", mat(p.M)}, {"a", to_string(p.a)}};
  if (p.experiment) j["experiment"] = *p.experiment;
  return j;
}

ExperimentSpec experiment_of(const Problem& p) {
  ExperimentSpec e;
  e.Q = p.Q;
  e.M = p.M;
  e.a = p.a;
  e.float_entries = p.float_entries;
  if (!p.experiment) return e;
  const json& x = *p.experiment;
  try {
    if (x.contains("lo")) e.lo = x["lo"].get<double>();
    if (x.contains("hi")) e.hi = x["hi"].get<double>();
    if (x.contains("step")) e.step = x["step"].get<double>();
    if (x.contains("eps")) e.eps = x["eps"].get<double>();
    if (x.contains("heights")) e.heights = x["heights"].get<std::vector<std::int64_t>>();
    if (x.contains("source")) e.source = x["source"].get<std::string>();
    if (x.contains("orbit_cap")) e.orbit_cap = x["orbit_cap"].get<std::size_t>();
    if (x.contains("orbit_budget")) e.orbit_budget = x["orbit_budget"].get<std::size_t>();
    if (x.contains("seed")) e.seed = x["seed"].get<std::uint64_t>();
  } catch (const json::exception& err) {
    throw ParseError(std::string("experiment: ") + err.what());
  }
  try {
    e.validate();
  } catch (const std::invalid_argument& err) {
    throw ParseError(std::string("experiment: ") + err.what());
  }
  return e;
}

}  // namespace qdl
