#pragma once

#include <stdexcept>
#include <string>

namespace regimeshift {

/// Input outside the model's domain (negative rate, non-finite spot, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A formula family was asked to evaluate at a point where its coefficients
/// are singular (e.g. beta_b = 1); the caller must route to a special case.
class UnsupportedError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Root bracketing or solver invariants failed.
class SolverError : public std::runtime_error {
 public:
  enum class Kind { BracketFailure, InternalConsistency };

  SolverError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace regimeshift
