#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace orlicz {

/// Nodes and weights of a one-dimensional quadrature rule.
template <typename Scalar = double>
struct QuadratureRule {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> nodes;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weights;

  Eigen::Index size() const { return nodes.size(); }
};

namespace detail {

// Golub-Welsch: eigenvalues of the symmetric Jacobi matrix with the given
// off-diagonal entries (zero diagonal).
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> jacobi_eigenvalues(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& off_diagonal) {
  const Eigen::Index m = off_diagonal.size() + 1;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> jacobi =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(m, m);
  for (Eigen::Index k = 0; k + 1 < m; ++k) {
    jacobi(k, k + 1) = off_diagonal(k);
    jacobi(k + 1, k) = off_diagonal(k);
  }
  Eigen::SelfAdjointEigenSolver<decltype(jacobi)> solver(jacobi, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

}  // namespace detail

/// Gauss-Hermite rule for the standard Gaussian probability measure
/// (probabilists' convention): Σ w_i g(x_i) ≈ ∫ g dγ, Σ w_i = 1, exact for
/// polynomials of degree ≤ 2m-1.
///
/// Nodes start from the Golub-Welsch eigenvalues and are polished by Newton
/// steps on the orthonormal Hermite recurrence; weights are the Christoffel
/// numbers 1 / Σ_{k<m} ψ_k(x)², which keeps full relative accuracy for the
/// tiny outer weights.
template <typename Scalar = double>
QuadratureRule<Scalar> gauss_hermite_rule(int order) {
  using std::sqrt;
  using std::abs;
  if (order < 1 || order > 256) throw std::invalid_argument("gauss_hermite_rule: order must be in [1, 256]");
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  QuadratureRule<Scalar> rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  if (order == 1) {
    rule.nodes(0) = Scalar(0);
    rule.weights(0) = Scalar(1);
    return rule;
  }
  Vec off(order - 1);
  for (int k = 1; k < order; ++k) off(k - 1) = sqrt(Scalar(k));
  rule.nodes = detail::jacobi_eigenvalues<Scalar>(off);

  // ψ_0 = 1, ψ_1 = x, ψ_{k+1} = (x ψ_k - √k ψ_{k-1}) / √(k+1)
  auto recurrence = [order](Scalar x, Scalar& psi_m, Scalar& psi_m1, Scalar& sum_sq) {
    Scalar prev = Scalar(0);
    Scalar cur = Scalar(1);
    sum_sq = Scalar(0);
    for (int k = 0; k < order; ++k) {
      sum_sq += cur * cur;
      const Scalar next = (x * cur - sqrt(Scalar(k)) * prev) / sqrt(Scalar(k + 1));
      prev = cur;
      cur = next;
    }
    psi_m = cur;
    psi_m1 = prev;
  };

  for (int i = 0; i < order; ++i) {
    Scalar x = rule.nodes(i);
    Scalar psi_m, psi_m1, sum_sq;
    for (int it = 0; it < 8; ++it) {
      recurrence(x, psi_m, psi_m1, sum_sq);
      const Scalar dpsi = sqrt(Scalar(order)) * psi_m1;
      const Scalar step = psi_m / dpsi;
      x -= step;
      if (abs(step) <= Scalar(4) * Eigen::NumTraits<Scalar>::epsilon() * (Scalar(1) + abs(x))) break;
    }
    recurrence(x, psi_m, psi_m1, sum_sq);
    rule.nodes(i) = x;
    rule.weights(i) = Scalar(1) / sum_sq;
  }
  // Symmetrize: the rule is exactly symmetric in exact arithmetic.
  for (int i = 0; i < order / 2; ++i) {
    const int j = order - 1 - i;
    const Scalar x = (rule.nodes(j) - rule.nodes(i)) / Scalar(2);
    const Scalar w = (rule.weights(i) + rule.weights(j)) / Scalar(2);
    rule.nodes(i) = -x;
    rule.nodes(j) = x;
    rule.weights(i) = w;
    rule.weights(j) = w;
  }
  if (order % 2 == 1) rule.nodes(order / 2) = Scalar(0);
  return rule;
}

/// Gauss-Legendre rule on [0, 1] (weights sum to 1).
template <typename Scalar = double>
QuadratureRule<Scalar> gauss_legendre_rule(int order) {
  using std::sqrt;
  using std::abs;
  if (order < 1 || order > 512) throw std::invalid_argument("gauss_legendre_rule: order must be in [1, 512]");
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  QuadratureRule<Scalar> rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  if (order == 1) {
    rule.nodes(0) = Scalar(0.5);
    rule.weights(0) = Scalar(1);
    return rule;
  }
  Vec off(order - 1);
  for (int k = 1; k < order; ++k) off(k - 1) = Scalar(k) / sqrt(Scalar(4 * k * k - 1));
  Vec roots = detail::jacobi_eigenvalues<Scalar>(off);

  auto legendre = [order](Scalar x, Scalar& p, Scalar& dp) {
    Scalar prev = Scalar(1);
    Scalar cur = x;
    for (int k = 1; k < order; ++k) {
      const Scalar next = (Scalar(2 * k + 1) * x * cur - Scalar(k) * prev) / Scalar(k + 1);
      prev = cur;
      cur = next;
    }
    p = cur;
    dp = Scalar(order) * (x * cur - prev) / (x * x - Scalar(1));
  };

  for (int i = 0; i < order; ++i) {
    Scalar x = roots(i);
    Scalar p, dp;
    for (int it = 0; it < 8; ++it) {
      legendre(x, p, dp);
      const Scalar step = p / dp;
      x -= step;
      if (abs(step) <= Scalar(4) * Eigen::NumTraits<Scalar>::epsilon()) break;
    }
    legendre(x, p, dp);
    rule.nodes(i) = (x + Scalar(1)) / Scalar(2);
    rule.weights(i) = Scalar(1) / ((Scalar(1) - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace orlicz
