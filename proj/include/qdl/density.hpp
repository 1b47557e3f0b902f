#pragma once

// Coverage of a target grid in R^s by the values M(x), x in X_Z with |x| <= H.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "qdl/latpoints.hpp"
#include "qdl/matrix.hpp"

namespace qdl {

struct ExperimentSpec {
  QMatrix Q;
  QMatrix M;  // s x d
  Rational a;
  bool float_entries = false;
  double lo = -5, hi = 5;  // target box [lo, hi]^s
  double step = 0.25;
  double eps = 0.25;
  std::vector<std::int64_t> heights{10, 20, 40, 60};
  std::string source = "box";  // "box" or "box+orbit"
  std::size_t orbit_cap = 200000;
  std::size_t orbit_budget = 64;
  std::uint64_t node_budget = default_node_budget();
  std::uint64_t seed = 0;
  unsigned jobs = 0;

  /// Throws std::invalid_argument on eps <= 0, step <= 0 or a non-increasing schedule.
  void validate() const;
};

struct Nearest {
  std::vector<double> target;
  double distance = 0;
  IntVector witness;
  std::vector<double> value;
  bool hit = false;
};

struct HeightReport {
  std::int64_t H = 0;
  std::size_t points = 0;
  bool exhaustive = true;
  std::size_t hits = 0;
  std::size_t targets = 0;
  double coverage = 0;
  double max_gap = 0;
  /// [0,eps/4), [eps/4,eps/2), [eps/2,eps), [eps,2eps), [2eps,inf)
  std::array<std::size_t, 5> histogram{};
  double roundoff_bound = 0;
  std::vector<Nearest> nearest;
};

struct CoverageReport {
  bool hypotheses_ok = true;
  std::string status;  // "ok" or "hypotheses-violated"
  std::vector<std::size_t> order;
  std::vector<HeightReport> rows;
};

/// Sup-norm nearest neighbour over precomputed values with lexicographic tie-breaking.
class ValueIndex {
 public:
  ValueIndex(std::vector<IntVector> points, std::vector<std::vector<double>> values);
  std::size_t size() const { return points_.size(); }
  /// Throws std::invalid_argument on an empty index.
  Nearest nearest(const std::vector<double>& b) const;

 private:
  std::vector<IntVector> points_;
  std::vector<std::vector<double>> values_;
  std::vector<std::size_t> by_first_;  // sorted by first value coordinate
};

std::vector<std::vector<double>> target_grid(std::size_t s, double lo, double hi, double step);
std::vector<double> evaluate(const Matrix<double>& m, const IntVector& x);
/// Worst-case |float M(x) - M(x)| for the given point.
double roundoff_bound(const Matrix<double>& m, const IntVector& x);

CoverageReport run_experiment(const ExperimentSpec& spec);

nlohmann::json to_json(const CoverageReport& r);
std::string to_csv(const CoverageReport& r);

}  // namespace qdl
