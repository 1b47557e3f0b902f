#pragma once

#include <stdexcept>
#include <string>

namespace qdl {

/// Shapes of operands do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Two quadratic scalars from different fields Q(sqrt D) were combined.
class FieldMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A product of root-scaled matrices would leave an unsquared root behind.
class NotRepresentable : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Text or JSON input could not be parsed.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violates a mathematical hypothesis of an operation.
/// `condition()` names the failed hypothesis, e.g. "indefinite_restricted".
class HypothesisError : public std::runtime_error {
 public:
  HypothesisError(std::string condition, const std::string& what)
      : std::runtime_error(what), condition_(std::move(condition)) {}
  const std::string& condition() const noexcept { return condition_; }

 private:
  std::string condition_;
};

/// An exact check that cannot fail on correct code did fail.
class InvariantBreach : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace qdl
