#pragma once

#include "orlicz/polynomial.hpp"

#include <Eigen/Dense>

#include <map>

namespace orlicz {

/// Probabilists' Hermite polynomials He_k(t) for k = 0..max_degree via
/// He_{k+1} = t He_k - k He_{k-1}. These are δ^k 1 for the Gaussian
/// divergence δ = t - d/dt (not the physicists' H_k).
Eigen::VectorXd hermite_values(double t, int max_degree);

/// Σ c_α H_α(x) with H_α(x) = Π He_{αᵢ}(xᵢ). E_γ[H_α H_β] = α! 1(α=β).
class HermiteSeries {
 public:
  using Coefficients = std::map<MultiIndex, double>;

  HermiteSeries() = default;
  explicit HermiteSeries(int dim, Coefficients coeffs = {});

  /// The basis element H_α.
  static HermiteSeries basis(const MultiIndex& alpha, double scale = 1.0);

  int dim() const { return dim_; }
  const Coefficients& coefficients() const { return coeffs_; }
  double coefficient(const MultiIndex& alpha) const;
  int degree() const;

  double operator()(const Eigen::VectorXd& x) const;

  /// ∂ᵢ H_α = αᵢ H_{α-eᵢ}
  HermiteSeries partial(int axis) const;
  /// δᵢ H_α = H_{α+eᵢ}
  HermiteSeries divergence(int axis) const;

  Polynomial to_polynomial() const;

  HermiteSeries& operator+=(const HermiteSeries& other);
  friend HermiteSeries operator*(double s, HermiteSeries h);

  double distance(const HermiteSeries& other) const;

 private:
  void prune();

  int dim_ = 1;
  Coefficients coeffs_;
};

}  // namespace orlicz
