#pragma once

#include "orlicz/estimate.hpp"
#include "orlicz/finite_oracle.hpp"
#include "orlicz/gaussian_measure.hpp"
#include "orlicz/random_field.hpp"

#include <Eigen/Dense>

#include <vector>

namespace orlicz {

/// Tolerance on |E u| for the "centered" precondition.
inline constexpr double kCenterTol = 1e-8;

/// K₁(u) = log E_γ[e^u]. A non-centered u is rejected unless `auto_center`
/// is set, in which case u - E_γ[u] is used.
Estimate k1(const RandomField& u, const GaussianIntegrator& I, bool auto_center = false);

/// q = exp(u - K₁(u)) with E_γ[u] = 0.
class ExpModelPoint {
 public:
  /// Throws DomainError when K₁(u) diverges (u outside the proper domain)
  /// or u is not centered and `auto_center` is off.
  static ExpModelPoint make(const RandomField& u, const GaussianIntegrator& I, bool auto_center = false);
  static ExpModelPoint reference(int dim);

  int dim() const { return u_.dim(); }
  const RandomField& u() const { return u_; }
  double k1() const { return k1_; }
  /// u - K₁(u)
  RandomField log_density() const { return u_ - k1_; }
  RandomField density() const { return RandomField::compose(Activation::Exp, log_density()); }

 private:
  ExpModelPoint(RandomField u, double k1) : u_(std::move(u)), k1_(k1) {}
  RandomField u_;
  double k1_;
};

/// A model point with a velocity v satisfying E_q[v] = 0.
struct BundleElement {
  ExpModelPoint base;
  RandomField v;
};

BundleElement make_bundle_element(const ExpModelPoint& base, const RandomField& v, const GaussianIntegrator& I);

/// s₁(q) = log q - E_γ[log q]. Requires q > 0 at the probe points and
/// |E_γ[q] - 1| ≤ norm_tol.
RandomField chart(const RandomField& q, const GaussianIntegrator& I, double norm_tol = 1e-6);

struct RelativeCumulant {
  Estimate value;             // K_p(u) = log E_p[e^u]
  double chain_residual = 0;  // sup |e^{u - K_p(u)} p - e^{w - K₁(w)}| at probe points, w = u_p + u recentered
};

RelativeCumulant relative_cumulant(const ExpModelPoint& p, const RandomField& u, const GaussianIntegrator& I,
                                   bool auto_center = false);

/// p(θ) = exp(Σ θᵢuᵢ - κ(θ)) for centered statistics uᵢ.
struct ExpFamily {
  std::vector<RandomField> stats;

  int size() const { return static_cast<int>(stats.size()); }
  RandomField combination(const Eigen::VectorXd& theta) const;
};

/// κ(θ); throws DomainError outside the proper domain.
double cumulant(const ExpFamily& F, const Eigen::VectorXd& theta, const GaussianIntegrator& I);

struct FisherReport {
  double kappa = 0.0;
  Eigen::VectorXd gradient;           // E_p[uᵢ]
  Eigen::MatrixXd fisher_covariance;  // E_p[(uᵢ - ∂ᵢκ)(uⱼ - ∂ⱼκ)]
  Eigen::MatrixXd fisher_hessian;     // central differences of κ with one Richardson step
  double max_difference = 0.0;
  bool positive_semidefinite = true;
  double step = 0.0;
};

FisherReport cumulant_and_fisher(const ExpFamily& F, const Eigen::VectorXd& theta, const GaussianIntegrator& I,
                                 double step = 1e-3);

struct DerivativeCheck {
  Eigen::VectorXd finite_difference;  // ∂ᵢ E_{p(θ)}[f]
  Eigen::VectorXd covariance;         // E_p[(f - E_p f)(uᵢ - ∂ᵢκ)]
  double residual = 0.0;
};

DerivativeCheck expectation_derivative_check(const ExpFamily& F, const Eigen::VectorXd& theta, const RandomField& f,
                                             const GaussianIntegrator& I, double step = 1e-3);

/// ½ E_γ[|∇u_p - ∇u_q|² p]
Estimate hyvarinen(const ExpModelPoint& p, const ExpModelPoint& q, const GaussianIntegrator& I);

struct OttoReport {
  Estimate value;            // E_γ[∇f·∇g p]
  Estimate adjoint;          // E_γ[f δ·(p∇g)]
  double adjoint_residual;
  Estimate literal_adjoint;  // E_γ[f δ·∇(g p)], equal to `value` only when E_γ[g ∇f·∇p] = 0
  double mean_f = 0.0;       // E_p f and E_p g, subtracted before pairing
  double mean_g = 0.0;
};

OttoReport otto_inner(const RandomField& f, const RandomField& g, const ExpModelPoint& p, const GaussianIntegrator& I);

struct LogSobolevReport {
  double entropy = 0.0;  // E_γ[p log p]
  double energy = 0.0;   // 2 E_γ[|∇√p|²]
  double slack = 0.0;    // energy - entropy
};

LogSobolevReport log_sobolev_check(const ExpModelPoint& p, const GaussianIntegrator& I);

/// (P, Ṗ) on the L²(γ) sphere of radius 2.
struct SpherePoint {
  RandomField P;
  RandomField P_dot;
};

/// (p, u) in the statistical bundle.
struct BundlePoint {
  RandomField p;
  RandomField u;
};

/// (p, u) ↦ (2√p, u√p)
SpherePoint bundle_to_sphere(const RandomField& p, const RandomField& u, const GaussianIntegrator& I);
/// (P, Ṗ) ↦ (P²/4, 2Ṗ/P)
BundlePoint sphere_to_bundle(const RandomField& P, const RandomField& P_dot, const GaussianIntegrator& I);

struct SphereCheck {
  double mass = 0.0;            // ∫p dγ
  double mean_u1 = 0.0;         // E_p[u₁]
  double mean_u2 = 0.0;
  double fisher_bundle = 0.0;   // E_p[u₁u₂]
  double fisher_sphere = 0.0;   // ∫Ṗ₁Ṗ₂ dγ
  double roundtrip = 0.0;       // sup over probe points of the round-trip error in (p, u₁)
};

SphereCheck sphere_check(const RandomField& p, const RandomField& u1, const RandomField& u2,
                         const GaussianIntegrator& I);

/// Portmanteau conditions for two strictly positive probability vectors.
PortmanteauReport portmanteau_check(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

}  // namespace orlicz
