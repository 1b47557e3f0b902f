#pragma once

// Integer points on {x in Z^d : Q(x) = a} inside a sup-norm box, and their
// images under integral automorphs of Q.

#include <cstdint>
#include <vector>

#include "qdl/exactnum.hpp"
#include "qdl/matrix.hpp"

namespace qdl {

using IntVector = std::vector<std::int64_t>;

/// Q and a scaled by a common positive integer so that all entries are integers.
struct IntegralForm {
  std::size_t d = 0;
  std::vector<std::int64_t> gram;  // row-major d x d
  std::int64_t target = 0;

  std::int64_t at(std::size_t i, std::size_t j) const { return gram[i * d + j]; }
  /// Exact x^T G x (throws std::overflow_error past 127 bits).
  __int128 value(const IntVector& x) const;
  bool on_level(const IntVector& x) const { return value(x) == target; }
};

/// Throws DimensionError for non-square/asymmetric grams, FieldMismatch for irrational entries.
IntegralForm integral_form(const QMatrix& gram, const Rational& a);

struct PointSet {
  std::vector<IntVector> points;  // sorted, unique
  std::int64_t height = 0;
  bool exhaustive = true;
  std::uint64_t nodes = 0;            // backtracking nodes visited
  std::vector<std::size_t> order;     // variable order, outermost first
};

/// Node budget from QDL_NODE_BUDGET, default 4e9.
std::uint64_t default_node_budget();

/// All x with |x|_inf <= H and x^T G x = a; jobs = 0 means hardware concurrency.
PointSet enumerate_box(const IntegralForm& form, std::int64_t H, std::uint64_t node_budget = default_node_budget(),
                       unsigned jobs = 0);

struct Automorph {
  std::vector<std::int64_t> gamma;  // row-major d x d
  std::string kind;                 // "signed_permutation", "reflection", "transvection"
  IntVector apply(const IntVector& x) const;
};

bool is_automorph(const IntegralForm& form, const std::vector<std::int64_t>& gamma);

/// Signed permutations preserving the gram, reflections in short vectors and
/// Eichler transvections along small isotropic vectors; at most `budget` results.
std::vector<Automorph> find_automorphs(const IntegralForm& form, std::size_t budget = 64);

/// Breadth-first closure of the seeds under autos, pruned at |x|_inf <= H_out, capped at `cap` points.
PointSet orbit_expand(const IntegralForm& form, const PointSet& seed, const std::vector<Automorph>& autos,
                      std::int64_t H_out, std::size_t cap);

std::int64_t sup_norm(const IntVector& x);

}  // namespace qdl
