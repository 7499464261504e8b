#pragma once

#include "orlicz/estimate.hpp"
#include "orlicz/gaussian_measure.hpp"
#include "orlicz/random_field.hpp"
#include "orlicz/young.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace orlicz {

/// Outcome of a norm computation. When `diverged` is set the norm is +∞ and
/// `value` is meaningless.
struct NormResult {
  bool diverged = false;
  std::string reason;
  double value = 0.0;
  std::string method;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double residual = 0.0;  // |modular(value) - 1| for Luxemburg, 0 otherwise
  int evaluations = 0;
};

/// ρ ↦ ∫Φ(|f|/ρ); a diverged Estimate counts as +∞.
using Modular = std::function<Estimate(double rho)>;

struct LuxemburgOptions {
  double rel_tol = 1e-13;  // on the bracket width
  int max_doublings = 200;
};

/// Gauge of a nonincreasing modular: the ρ with modular(ρ) = 1, found by
/// geometric bracketing from ρ = 1 and bisection.
NormResult luxemburg_from_modular(const Modular& modular, const LuxemburgOptions& opts = {});

/// inf{ρ > 0 : ∫Φ(|f|/ρ) dγ ≤ 1}
NormResult luxemburg_norm(const RandomField& f, const YoungFunction& phi, const GaussianIntegrator& I,
                          const LuxemburgOptions& opts = {});

/// Amemiya form inf_{k>0} (1 + ∫Φ(k|f|) dγ) / k of the Orlicz norm.
/// Satisfies ‖f‖_Lux ≤ dual ≤ 2‖f‖_Lux.
NormResult dual_norm(const RandomField& f, const YoungFunction& phi, const GaussianIntegrator& I);

struct MomentNormResult {
  bool diverged = false;
  int diverged_at = 0;          // first order k whose moment diverged
  double value = 0.0;           // max_k ((2k)!⁻¹ E f^{2k})^{1/2k}
  int argmax = 0;
  std::vector<double> terms;    // per k = 1..k_max (up to the divergence)
};

MomentNormResult moment_norm(const RandomField& f, const GaussianIntegrator& I, int k_max = 20);

struct TailRow {
  double t;
  double probability;  // γ(|f| > t)
  double error_bound;
  double bound;        // 4 exp(-t/ρ)
  bool pass;
};

struct TailCertificate {
  NormResult rho;  // ‖f‖ under cosh₂
  std::vector<TailRow> rows;
  bool pass = true;
};

TailCertificate tail_certificate(const RandomField& f, const GaussianIntegrator& I, std::span<const double> t_grid);

struct ClassRow {
  double lambda;
  Estimate mgf;  // E exp(λ|f|)
};

struct ClassVerdict {
  bool in_M = true;
  std::optional<double> max_finite_lambda;
  std::optional<double> min_diverged_lambda;
  std::vector<ClassRow> rows;
};

/// λ grid that brackets 1/2 finely; used by the CLI.
std::vector<double> default_lambda_grid();

ClassVerdict orlicz_class_member(const RandomField& f, const GaussianIntegrator& I, std::span<const double> lambda_grid);

struct TruncationRow {
  double N;
  Estimate value;  // ∫Φ(λ(f - f_N)) dγ with f_N = f·1(|x| ≤ N)
};

std::vector<TruncationRow> truncation_convergence(const RandomField& f, const YoungFunction& phi,
                                                  const GaussianIntegrator& I, std::span<const double> N_list,
                                                  double lambda);

}  // namespace orlicz
