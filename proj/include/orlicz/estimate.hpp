#pragma once

#include <stdexcept>
#include <string>

namespace orlicz {

/// Thrown when a precondition on the mathematical domain fails
/// (non-monotone φ, nonpositive density, unbounded activation slope, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when the finite value of a diverged estimate is requested.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Result of an integral or derived scalar: either a finite value with an
/// error bound, or a "diverged" verdict. Infinity is never encoded as a float.
class Estimate {
 public:
  static Estimate finite(double value, double error_bound = 0.0) {
    Estimate e;
    e.value_ = value;
    e.error_bound_ = error_bound;
    return e;
  }

  static Estimate divergent(std::string reason) {
    Estimate e;
    e.diverged_ = true;
    e.reason_ = std::move(reason);
    return e;
  }

  bool diverged() const { return diverged_; }
  bool is_finite() const { return !diverged_; }

  double value() const {
    if (diverged_) throw DivergenceError("estimate diverged: " + reason_);
    return value_;
  }

  /// The finite value, or `fallback` when diverged.
  double value_or(double fallback) const { return diverged_ ? fallback : value_; }

  double error_bound() const { return error_bound_; }
  const std::string& reason() const { return reason_; }

 private:
  Estimate() = default;

  double value_ = 0.0;
  double error_bound_ = 0.0;
  bool diverged_ = false;
  std::string reason_;
};

}  // namespace orlicz
