#include "qdl/density.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <thread>

#include "qdl/errors.hpp"
#include "qdl/quadforms.hpp"

namespace qdl {

void ExperimentSpec::validate() const {
  if (!(eps > 0)) throw std::invalid_argument("eps must be positive");
  if (!(step > 0)) throw std::invalid_argument("grid step must be positive");
  if (!(hi >= lo)) throw std::invalid_argument("target box needs lo <= hi");
  if (heights.empty()) throw std::invalid_argument("height schedule is empty");
  for (std::size_t k = 0; k < heights.size(); ++k) {
    if (heights[k] < 0) throw std::invalid_argument("heights must be non-negative");
    if (k && heights[k] <= heights[k - 1]) throw std::invalid_argument("height schedule must be strictly increasing");
  }
  if (source != "box" && source != "box+orbit") throw std::invalid_argument("source must be box or box+orbit");
}

ValueIndex::ValueIndex(std::vector<IntVector> points, std::vector<std::vector<double>> values)
    : points_(std::move(points)), values_(std::move(values)), by_first_(points_.size()) {
  for (std::size_t k = 0; k < by_first_.size(); ++k) by_first_[k] = k;
  std::sort(by_first_.begin(), by_first_.end(), [&](std::size_t a, std::size_t b) {
    if (values_[a][0] != values_[b][0]) return values_[a][0] < values_[b][0];
    return points_[a] < points_[b];
  });
}

Nearest ValueIndex::nearest(const std::vector<double>& b) const {
  if (points_.empty()) throw std::invalid_argument("nearest value over an empty point set");
  const double inf = std::numeric_limits<double>::infinity();
  double best = inf;
  std::size_t arg = 0;
  auto consider = [&](std::size_t k) {
    double dist = 0;
    for (std::size_t i = 0; i < b.size(); ++i) dist = std::max(dist, std::fabs(values_[k][i] - b[i]));
    if (dist < best || (dist == best && points_[k] < points_[arg])) {
      best = dist;
      arg = k;
    }
  };
  // walk outwards from the insertion point; |v_0 - b_0| bounds the sup distance below
  const auto mid = std::lower_bound(by_first_.begin(), by_first_.end(), b[0],
                                    [&](std::size_t k, double x) { return values_[k][0] < x; });
  for (auto it = mid; it != by_first_.end(); ++it) {
    if (values_[*it][0] - b[0] > best) break;
    consider(*it);
  }
  for (auto it = mid; it != by_first_.begin();) {
    --it;
    if (b[0] - values_[*it][0] > best) break;
    consider(*it);
  }
  return {b, best, points_[arg], values_[arg], false};
}

std::vector<std::vector<double>> target_grid(std::size_t s, double lo, double hi, double step) {
  const std::size_t n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<std::vector<double>> out;
  std::vector<std::size_t> idx(s, 0);
  for (;;) {
    std::vector<double> b(s);
    for (std::size_t i = 0; i < s; ++i) b[i] = lo + static_cast<double>(idx[i]) * step;
    out.push_back(std::move(b));
    std::size_t k = s;
    while (k > 0 && idx[k - 1] + 1 == n) idx[--k] = 0;
    if (k == 0) break;
    ++idx[k - 1];
  }
  return out;
}

std::vector<double> evaluate(const Matrix<double>& m, const IntVector& x) {
  std::vector<double> v(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) v[i] += m(i, j) * static_cast<double>(x[j]);
  return v;
}

double roundoff_bound(const Matrix<double>& m, const IntVector& x) {
  const double u = std::numeric_limits<double>::epsilon() / 2;
  double worst = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double sum = 0;
    for (std::size_t j = 0; j < m.cols(); ++j) sum += std::fabs(m(i, j)) * std::fabs(static_cast<double>(x[j]));
    worst = std::max(worst, static_cast<double>(m.cols() + 4) * u * sum);
  }
  return worst;
}

CoverageReport run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.M.cols() != spec.Q.rows()) throw DimensionError("M must have d columns");
  CoverageReport report;
  try {
    report.hypotheses_ok = check_conditions(QuadraticForm(spec.Q), LinearMap(spec.M), spec.float_entries).overall;
  } catch (const HypothesisError&) {
    report.hypotheses_ok = false;
  }
  report.status = report.hypotheses_ok ? "ok" : "hypotheses-violated";

  const IntegralForm form = integral_form(spec.Q, spec.a);
  const std::int64_t top = spec.heights.back();
  PointSet ps = enumerate_box(form, top, spec.node_budget, spec.jobs);
  report.order = ps.order;
  if (spec.source == "box+orbit") {
    const auto autos = find_automorphs(form, spec.orbit_budget);
    const auto more = orbit_expand(form, ps, autos, top, spec.orbit_cap);
    std::vector<IntVector> merged;
    std::set_union(ps.points.begin(), ps.points.end(), more.points.begin(), more.points.end(),
                   std::back_inserter(merged));
    ps.points = std::move(merged);
  }

  const Matrix<double> mf = spec.M.map([](const QuadScalar& x) { return x.to_double(); });
  std::vector<std::vector<double>> values;
  std::vector<double> bounds;
  std::vector<std::int64_t> norms;
  for (const auto& x : ps.points) {
    values.push_back(evaluate(mf, x));
    bounds.push_back(roundoff_bound(mf, x));
    norms.push_back(sup_norm(x));
  }
  const auto grid = target_grid(spec.M.rows(), spec.lo, spec.hi, spec.step);
  unsigned jobs = spec.jobs ? spec.jobs : std::max(1u, std::thread::hardware_concurrency());

  for (const std::int64_t H : spec.heights) {
    HeightReport row;
    row.H = H;
    row.exhaustive = ps.exhaustive;
    row.targets = grid.size();
    std::vector<IntVector> pts;
    std::vector<std::vector<double>> vals;
    for (std::size_t k = 0; k < ps.points.size(); ++k)
      if (norms[k] <= H) {
        pts.push_back(ps.points[k]);
        vals.push_back(values[k]);
        row.roundoff_bound = std::max(row.roundoff_bound, bounds[k]);
      }
    row.points = pts.size();
    if (pts.empty()) {
      row.max_gap = std::numeric_limits<double>::infinity();
      row.histogram[4] = grid.size();
      report.rows.push_back(std::move(row));
      continue;
    }
    const ValueIndex index(std::move(pts), std::move(vals));
    row.nearest.resize(grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t k; (k = next.fetch_add(1)) < grid.size();) row.nearest[k] = index.nearest(grid[k]);
    };
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < std::min<std::size_t>(jobs, grid.size()); ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (auto& n : row.nearest) {
      n.hit = n.distance < spec.eps;
      if (n.hit) {
        ++row.hits;
        double dist = 0;
        const auto v = evaluate(mf, n.witness);
        for (std::size_t i = 0; i < v.size(); ++i) dist = std::max(dist, std::fabs(v[i] - n.target[i]));
        if (!form.on_level(n.witness) || !(dist < spec.eps + row.roundoff_bound))
          throw InvariantBreach("witness audit failed");
      }
      row.max_gap = std::max(row.max_gap, n.distance);
      const double e = spec.eps;
      const std::size_t bin = n.distance < e / 4 ? 0 : n.distance < e / 2 ? 1 : n.distance < e ? 2 : n.distance < 2 * e ? 3 : 4;
      ++row.histogram[bin];
    }
    row.coverage = static_cast<double>(row.hits) / static_cast<double>(row.targets);
    report.rows.push_back(std::move(row));
  }
  return report;
}

namespace {

nlohmann::json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

std::string fmt(double x) {
  if (!std::isfinite(x)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

nlohmann::json to_json(const CoverageReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& h : r.rows) {
    nlohmann::json near = nlohmann::json::array();
    for (const auto& n : h.nearest)
      near.push_back({{"target", n.target},
                      {"distance", number(n.distance)},
                      {"witness", n.witness},
                      {"value", n.value},
                      {"hit", n.hit}});
    rows.push_back({{"H", h.H},
                    {"points", h.points},
                    {"exhaustive", h.exhaustive},
                    {"hits", h.hits},
                    {"targets", h.targets},
                    {"coverage", h.coverage},
                    {"max_gap", number(h.max_gap)},
                    {"histogram", h.histogram},
                    {"roundoff_bound", h.roundoff_bound},
                    {"nearest", near}});
  }
  return {{"status", r.status}, {"hypotheses_ok", r.hypotheses_ok}, {"variable_order", r.order}, {"rows", rows}};
}

std::string to_csv(const CoverageReport& r) {
  std::string out = "H,points,coverage,max_gap\n";
  for (const auto& h : r.rows)
    out += std::to_string(h.H) + "," + std::to_string(h.points) + "," + fmt(h.coverage) + "," + fmt(h.max_gap) + "\n";
  return out;
}

}  // namespace qdl
