#pragma once

#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace orlicz {

/// Closed forms of the built-in Young functions, templated on the scalar so
/// they can be evaluated in extended precision by oracles.
namespace young_closed_form {

template <typename Scalar>
Scalar power(Scalar x, Scalar alpha) {
  using std::pow;
  return pow(x, alpha) / alpha;
}

template <typename Scalar>
Scalar exp2(Scalar x) {
  using std::expm1;
  return expm1(x) - x;
}

template <typename Scalar>
Scalar exp2_conjugate(Scalar y) {
  using std::log1p;
  return (Scalar(1) + y) * log1p(y) - y;
}

template <typename Scalar>
Scalar cosh2(Scalar x) {
  using std::cosh;
  using std::sinh;
  using std::abs;
  // cosh x - 1 = 2 sinh²(x/2) avoids cancellation near 0
  const Scalar s = sinh(x / Scalar(2));
  return abs(x) < Scalar(1) ? Scalar(2) * s * s : cosh(x) - Scalar(1);
}

template <typename Scalar>
Scalar cosh2_conjugate(Scalar y) {
  using std::asinh;
  using std::sqrt;
  using std::hypot;
  // ∫₀^y asinh v dv = y asinh y - √(1+y²) + 1
  const Scalar r = hypot(Scalar(1), y);
  return y * asinh(y) - y * y / (r + Scalar(1));
}

template <typename Scalar>
Scalar gauss2(Scalar x) {
  using std::expm1;
  return expm1(x * x / Scalar(2));
}

}  // namespace young_closed_form

/// An even convex Φ with Φ(0)=0 generated by a strictly increasing φ with
/// φ(0)=0 and φ(u) → ∞. Immutable; cheap to copy (shared implementation).
///
/// Names: "power:<alpha>", "exp2", "exp2*", "cosh2", "cosh2*", "gauss2",
/// "sq:<name>" (Φ̄(x) = Φ(x²)) and "conj:<name>" for a numerically conjugated
/// function. `name()` round-trips through `parse()` for every named kind.
class YoungFunction {
 public:
  enum class Kind { Power, Exp2, Exp2Conj, Cosh2, Cosh2Conj, Gauss2, Squared, Custom };

  class Impl;

  static YoungFunction power(double alpha);
  static YoungFunction exp2();
  static YoungFunction exp2_conjugate();
  static YoungFunction cosh2();
  static YoungFunction cosh2_conjugate();
  static YoungFunction gauss2();
  static YoungFunction squared(const YoungFunction& base);

  /// φ sampled on an increasing grid starting at 0 with φ(0)=0, interpolated
  /// by a shape-preserving piecewise cubic and extended linearly past the grid.
  static YoungFunction from_derivative(std::vector<double> grid, std::vector<double> phi_values);

  /// Parse a built-in name; throws std::invalid_argument on unknown names.
  static YoungFunction parse(std::string_view name);

  Kind kind() const;
  std::string name() const;
  /// Exponent for Kind::Power.
  double exponent() const;

  /// Φ(x) = Φ(|x|).
  double operator()(double x) const;
  /// log Φ(|x|), stable for arguments where Φ overflows; -inf at 0.
  double log_value(double x) const;
  /// φ(x) for x ≥ 0.
  double derivative(double x) const;
  /// φ⁻¹(y) for y ≥ 0.
  double derivative_inverse(double y) const;

  YoungFunction conjugate() const;

  /// Checks φ(0)=0 and strict increase of φ on a geometric probe grid;
  /// throws DomainError otherwise.
  void validate() const;

  explicit YoungFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

 private:
  std::shared_ptr<const Impl> impl_;
};

struct YoungLegendreReport {
  double young_gap;          // Φ(x) + Ψ(y) - xy
  double legendre_residual;  // Φ(x) + Ψ(φ(x)) - xφ(x)
};

YoungLegendreReport check_young_legendre(const YoungFunction& phi, double x, double y);

/// Numeric witness that Φ₁(x) ≤ Φ₂(kx) for every probed x ≥ x̄.
/// Holds only over [probe_lo, probe_hi]; it is not a proof.
struct DominationCertificate {
  bool holds = false;
  double k = 0.0;
  double x_bar = 0.0;
  double probe_lo = 0.0;
  double probe_hi = 0.0;
  int probes = 0;
};

/// Tries each k (ascending) and each threshold x̄ (ascending) and returns the
/// first pair for which Φ₁(x) ≤ Φ₂(kx) on a geometric grid over [x̄, probe_hi].
/// Comparison is done on log Φ so overflow does not decide the answer.
DominationCertificate eventually_dominates(const YoungFunction& smaller, const YoungFunction& larger,
                                           std::span<const double> k_grid,
                                           std::span<const double> x_thresholds,
                                           double probe_hi = 1e6, int probes_per_decade = 16);

/// Default grids used by the CLI and the tests.
std::vector<double> default_domination_k_grid();
std::vector<double> default_domination_thresholds();

}  // namespace orlicz
