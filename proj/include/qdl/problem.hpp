#pragma once

// Problem files: {"version":1, "d", "s", "sqrtD", "Q", "M", "a", "experiment"?}.
// Scalars are integers, "p/q" strings or {"a":"p/q","b":"r/s","sqrt":D}.
// Floating-point numbers are accepted in M only and are read as exact dyadic
// rationals; condition 3 is then reported as undecidable.

#include <optional>
#include <string>

#include "json.hpp"
#include "qdl/density.hpp"
#include "qdl/matrix.hpp"

namespace qdl {

struct Problem {
  int version = 1;
  std::size_t d = 0;
  std::size_t s = 0;
  std::int64_t sqrtD = 0;  // 0 when absent
  QMatrix Q;
  QMatrix M;
  Rational a;
  bool float_entries = false;
  std::optional<nlohmann::json> experiment;
};

/// Throws ParseError naming the offending field (e.g. "Q[1][2]").
QuadScalar parse_scalar(const nlohmann::json& j, const std::string& field, std::int64_t sqrtD = 0);
nlohmann::json scalar_to_json(const QuadScalar& x);

Problem parse_problem(const nlohmann::json& j);
/// Reads and parses a file; JSON syntax errors are reported with line and column.
Problem load_problem(const std::string& path);
nlohmann::json problem_to_json(const Problem& p);

/// Experiment block of a problem (defaults where fields are missing).
ExperimentSpec experiment_of(const Problem& p);

}  // namespace qdl
