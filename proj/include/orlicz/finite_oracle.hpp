#pragma once

#include "orlicz/estimate.hpp"
#include "orlicz/quadrature_rules.hpp"
#include "orlicz/random_field.hpp"
#include "orlicz/young.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <cmath>
#include <string>
#include <vector>

namespace orlicz {

/// Neumaier-compensated Σ xᵢ.
template <typename Derived>
typename Derived::Scalar compensated_sum(const Eigen::DenseBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  Scalar sum(0), comp(0);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const Scalar v = x.derived().coeff(i);
    const Scalar t = sum + v;
    comp += abs(sum) >= abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return sum + comp;
}

/// Finite sample space with strictly positive reference weights summing to 1.
template <typename Scalar = double>
class FiniteSpace {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit FiniteSpace(Vector weights, std::vector<std::string> labels = {})
      : weights_(std::move(weights)), labels_(std::move(labels)) {
    using std::abs;
    if (weights_.size() == 0) throw std::invalid_argument("FiniteSpace: no atoms");
    if (!labels_.empty() && static_cast<Eigen::Index>(labels_.size()) != weights_.size())
      throw DimensionMismatch("FiniteSpace: one label per atom");
    for (Eigen::Index i = 0; i < weights_.size(); ++i)
      if (!(weights_(i) > Scalar(0))) throw DomainError("FiniteSpace: weights must be strictly positive");
    if (abs(compensated_sum(weights_) - Scalar(1)) > Scalar(1e-12))
      throw DomainError("FiniteSpace: weights must sum to 1");
  }

  static FiniteSpace uniform(Eigen::Index n) { return FiniteSpace(Vector::Constant(n, Scalar(1) / Scalar(n))); }

  Eigen::Index size() const { return weights_.size(); }
  const Vector& weights() const { return weights_; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Σ wᵢ fᵢ
  Scalar expect(const Vector& f) const {
    check(f);
    return compensated_sum(weights_.cwiseProduct(f));
  }

  void check(const Vector& f) const {
    if (f.size() != size()) throw DimensionMismatch("FiniteSpace: vector length differs from the number of atoms");
  }

 private:
  Vector weights_;
  std::vector<std::string> labels_;
};

/// Tensor Gauss-Hermite nodes as a finite space, with the node coordinates
/// (dim × atoms) in the same order as the Gaussian integrator's tensor loop.
struct QuantizedGaussian {
  FiniteSpace<double> space;
  Eigen::MatrixXd points;

  Eigen::VectorXd sample(const RandomField& f) const;
};

QuantizedGaussian quantized_gaussian(int dim, int order);

/// Solves Σ wᵢ Φ(|fᵢ|/ρ) = 1 by bisection to relative width 1e-14.
template <typename Scalar>
Scalar exact_luxemburg(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& f, const YoungFunction& phi,
                       const FiniteSpace<Scalar>& space) {
  using std::abs;
  space.check(f);
  if (f.cwiseAbs().maxCoeff() == Scalar(0)) return Scalar(0);
  auto modular = [&](Scalar rho) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v(f.size());
    for (Eigen::Index i = 0; i < f.size(); ++i) v(i) = Scalar(phi(static_cast<double>(abs(f(i)) / rho)));
    return space.expect(v);
  };
  Scalar lo(1), hi(1);
  if (modular(hi) > Scalar(1)) {
    do {
      lo = hi;
      hi *= Scalar(2);
    } while (modular(hi) > Scalar(1));
  } else {
    do {
      hi = lo;
      lo /= Scalar(2);
    } while (!(modular(lo) > Scalar(1)));
  }
  while (hi - lo > Scalar(1e-14) * hi) {
    const Scalar mid = (lo + hi) / Scalar(2);
    if (!(mid > lo && mid < hi)) break;
    if (modular(mid) > Scalar(1))
      lo = mid;
    else
      hi = mid;
  }
  return (lo + hi) / Scalar(2);
}

/// log Σ wᵢ e^{uᵢ}, by log-sum-exp.
template <typename Scalar>
Scalar exact_k1(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& u, const FiniteSpace<Scalar>& space) {
  using std::exp;
  using std::log;
  space.check(u);
  const Scalar m = u.maxCoeff();
  return m + log(space.expect((u.array() - m).exp().matrix()));
}

template <typename Scalar>
struct ExactModel {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> density;  // e^{u - K}
  Scalar k1;
};

/// q = exp(u - K₁(u)) for a centered u.
template <typename Scalar>
ExactModel<Scalar> exact_model(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& u, const FiniteSpace<Scalar>& space,
                               Scalar center_tol = Scalar(1e-12)) {
  using std::abs;
  if (abs(space.expect(u)) > center_tol) throw DomainError("exact_model: u is not centered");
  ExactModel<Scalar> m;
  m.k1 = exact_k1(u, space);
  m.density = (u.array() - m.k1).exp().matrix();
  return m;
}

/// u = log q - Σ wᵢ log qᵢ
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> exact_chart(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& q,
                                                     const FiniteSpace<Scalar>& space) {
  space.check(q);
  if (!(q.minCoeff() > Scalar(0))) throw DomainError("exact_chart: density must be strictly positive");
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> lq = q.array().log().matrix();
  return (lq.array() - space.expect(lq)).matrix();
}

/// K_p(u) = log Σ wᵢ pᵢ e^{uᵢ}
template <typename Scalar>
Scalar exact_relative_cumulant(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& p,
                               const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& u, const FiniteSpace<Scalar>& space) {
  using std::log;
  space.check(p);
  if (!(p.minCoeff() > Scalar(0))) throw DomainError("exact_relative_cumulant: density must be strictly positive");
  return exact_k1(Eigen::Matrix<Scalar, Eigen::Dynamic, 1>((u.array() + p.array().log()).matrix()), space);
}

template <typename Scalar>
struct ExactFamily {
  Scalar kappa;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> gradient;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> fisher_covariance;  // E_p[(uᵢ - ∂ᵢκ)(uⱼ - ∂ⱼκ)]
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> fisher_hessian;     // ∂ᵢ∂ⱼκ as finite sums
};

/// κ(θ) = log Σ w e^{θ·u} for statistics given as columns of `stats`.
template <typename Scalar>
ExactFamily<Scalar> exact_family(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& stats,
                                 const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& theta,
                                 const FiniteSpace<Scalar>& space) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (stats.rows() != space.size() || stats.cols() != theta.size())
    throw DimensionMismatch("exact_family: stats must be atoms × d and θ of length d");
  const Eigen::Index d = theta.size();
  const Vec s = stats * theta;
  ExactFamily<Scalar> out;
  out.kappa = exact_k1(s, space);
  const Vec p = (s.array() - out.kappa).exp().matrix();
  out.gradient.resize(d);
  for (Eigen::Index i = 0; i < d; ++i) out.gradient(i) = space.expect(p.cwiseProduct(stats.col(i)));
  out.fisher_covariance.resize(d, d);
  out.fisher_hessian.resize(d, d);
  // Z = Σ w e^s, Z_i = Σ w uᵢ e^s, Z_ij = Σ w uᵢuⱼ e^s; ∂ᵢ∂ⱼ log Z = Z_ij/Z - Z_i Z_j / Z²
  const Scalar shift = s.maxCoeff();
  const Vec e = (s.array() - shift).exp().matrix();
  const Scalar Z = space.expect(e);
  Vec Zi(d);
  for (Eigen::Index i = 0; i < d; ++i) Zi(i) = space.expect(e.cwiseProduct(stats.col(i)));
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      const Vec ci = (stats.col(i).array() - out.gradient(i)).matrix();
      const Vec cj = (stats.col(j).array() - out.gradient(j)).matrix();
      out.fisher_covariance(i, j) = space.expect(p.cwiseProduct(ci).cwiseProduct(cj));
      const Scalar Zij = space.expect(e.cwiseProduct(stats.col(i)).cwiseProduct(stats.col(j)));
      out.fisher_hessian(i, j) = Zij / Z - Zi(i) * Zi(j) / (Z * Z);
    }
  return out;
}

struct PortmanteauReport {
  std::vector<double> t;
  std::vector<double> log_z;              // log Z(t), Z(t) = Σ p^{1-t} q^t
  bool arc_finite = true;                 // Z finite on the whole grid, which contains [0, 1] in its interior
  bool log_convex = true;                 // midpoint test on every grid pair
  double worst_convexity_gap = 0.0;       // max of log Z(mid) - ½(log Z(a) + log Z(b))
  std::vector<double> exponents;          // a in the L^a conditions
  std::vector<double> moment_p_over_q;    // E_q[(p/q)^a]
  std::vector<double> moment_q_over_p;    // E_p[(q/p)^a]
  bool integrability = true;
  double c_lower = 1.0;                   // c_lower ‖v‖_q ≤ ‖v‖_p ≤ c_upper ‖v‖_q over the probe set
  double c_upper = 1.0;
  int probes = 0;
  bool all_hold() const { return arc_finite && log_convex && integrability; }
};

/// p and q are probability vectors on the atoms; zero atoms are rejected.
PortmanteauReport exact_portmanteau(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

nlohmann::json to_json(const PortmanteauReport& r);

/// Deterministic fixture set: 50 quantized-Gaussian comparisons plus finite
/// portmanteau instances. Each entry is {name, space, inputs, operation,
/// expected, tolerance}.
std::vector<nlohmann::json> generate_fixtures();

}  // namespace orlicz
