#pragma once

#include "orlicz/gaussian_measure.hpp"
#include "orlicz/orlicz_norms.hpp"
#include "orlicz/random_field.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace orlicz {

/// ‖f‖ under cosh₂ plus ‖∂ᵢf‖ under (cosh₂)² for each axis.
struct SobolevReport {
  NormResult f_norm;
  std::vector<NormResult> grad_norms;
  double total = 0.0;  // f_norm + Σ grad_norms, +∞ when not a member
  bool member = false;
  std::string reason;
};

SobolevReport sobolev_membership(const RandomField& f, const GaussianIntegrator& I);

/// Same norms with γ replaced by p·γ (p a positive density w.r.t. γ).
SobolevReport sobolev_membership_under(const RandomField& f, const RandomField& p, const GaussianIntegrator& I);

/// Bumps (1 - |x - c|²/s²)³ with centers along the first axis.
std::vector<RandomField> default_bumps(int dim);

struct WeakDerivativeReport {
  std::vector<double> residuals;  // |E[g φ] - E[f δᵢφ]| per bump
  double max_residual = 0.0;
};

/// Checks E[g φ] = E[f δᵢφ] over the bumps, with g the claimed derivative
/// (the symbolic ∂ᵢf when not given).
WeakDerivativeReport weak_derivative_check(const RandomField& f, int axis, const std::vector<RandomField>& bumps,
                                           const GaussianIntegrator& I,
                                           const std::optional<RandomField>& claimed = std::nullopt);

struct IncrementRow {
  double alpha;
  double identity_residual;      // ‖R₁(t) - t∫₀¹(τ_{-sth}∇f - ∇f)·h ds‖_α with 16-point Gauss-Legendre in s
  double identity_residual_gl8;  // same with 8 points
  double remainder;              // ‖R₁(t)‖_α, R₁(t) = τ_{-th}f - f - t∇f·h
  double remainder_half;         // ‖R₁(t/2)‖_α
  double ratio;                  // remainder_half / remainder (0 when remainder vanishes)
  bool superlinear;              // ratio ≤ 0.6
};

struct IncrementReport {
  std::vector<IncrementRow> rows;
  bool pass = true;
  double tolerance = 1e-8;
};

/// Per-α check of the first-order translation expansion; α defaults to {2, 4, 8}.
IncrementReport translation_increment_check(const RandomField& f, const Eigen::VectorXd& h, double t,
                                            const GaussianIntegrator& I, std::vector<double> alphas = {2.0, 4.0, 8.0});

struct CompositionReport {
  SobolevReport membership;
  double chain_residual = 0.0;  // max |E[G'(f)∂ᵢf φ] - E[G(f) δᵢφ]| over bumps and axes
  double lipschitz_constant = 0.0;
  bool lipschitz_holds = true;  // |G(t-h) - G(t)| ≤ K|h| on a probe grid
};

/// G∘f for an activation with bounded G'; unbounded slopes are rejected.
CompositionReport lipschitz_composition(Activation g, const RandomField& f, const GaussianIntegrator& I);

/// Σᵢ aᵢ G(Σⱼ Wᵢⱼ fⱼ - bᵢ)
RandomField neuron_field(const Eigen::MatrixXd& weights, const Eigen::VectorXd& biases,
                         const Eigen::VectorXd& amplitudes, Activation g, const std::vector<RandomField>& inputs);

SobolevReport neuron(const Eigen::MatrixXd& weights, const Eigen::VectorXd& biases, const Eigen::VectorXd& amplitudes,
                     Activation g, const std::vector<RandomField>& inputs, const GaussianIntegrator& I);

struct EmbeddingReport {
  double lhs = 0.0;              // ∫_{B_ρ} |f|^{2k} dx (Lebesgue)
  double rhs = 0.0;              // (2π)^{n/2} (2k)! e^{ρ²/2} ‖f‖
  double rhs_homogeneous = 0.0;  // (2π)^{n/2} (2k)! e^{ρ²/2} ‖f‖^{2k}
  double norm = 0.0;             // ‖f‖ under cosh₂
  bool pass = false;             // lhs ≤ rhs (1 + 1e-9)
  bool pass_homogeneous = false;
};

EmbeddingReport local_embedding_bound(const RandomField& f, double radius, int k, const GaussianIntegrator& I);

/// sup_{|x - x0| ≤ r} |f(x) - f(x0)| on a fixed stencil, for each radius.
std::vector<double> continuity_probe(const RandomField& f, const Eigen::VectorXd& x0, const std::vector<double>& radii);

}  // namespace orlicz
