#pragma once

#include <Eigen/Dense>

#include <map>
#include <vector>

namespace orlicz {

/// Exponent vector α ∈ ℕⁿ.
using MultiIndex = std::vector<int>;

int total_degree(const MultiIndex& alpha);
/// α! = Π αᵢ!
double multi_factorial(const MultiIndex& alpha);
/// All α with |α| ≤ degree in `dim` variables, graded then lexicographic.
std::vector<MultiIndex> multi_indices_up_to(int dim, int degree);

/// Polynomial in the monomial basis: Σ c_α x^α.
class Polynomial {
 public:
  using Coefficients = std::map<MultiIndex, double>;

  Polynomial() = default;
  explicit Polynomial(int dim, Coefficients coeffs = {});

  static Polynomial constant(int dim, double c);
  static Polynomial coordinate(int dim, int axis);

  int dim() const { return dim_; }
  const Coefficients& coefficients() const { return coeffs_; }
  double coefficient(const MultiIndex& alpha) const;
  int degree() const;
  bool is_zero() const { return coeffs_.empty(); }

  double operator()(const Eigen::VectorXd& x) const;

  Polynomial partial(int axis) const;
  /// δᵢp = xᵢp - ∂ᵢp
  Polynomial divergence(int axis) const;

  Polynomial& operator+=(const Polynomial& other);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-1.0) * b; }
  friend Polynomial operator*(double s, const Polynomial& p);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  /// Max |coefficient difference|.
  double distance(const Polynomial& other) const;

 private:
  void prune();

  int dim_ = 1;
  Coefficients coeffs_;
};

}  // namespace orlicz
