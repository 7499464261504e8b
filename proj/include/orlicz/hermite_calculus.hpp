#pragma once

#include "orlicz/estimate.hpp"
#include "orlicz/gaussian_measure.hpp"
#include "orlicz/hermite_series.hpp"
#include "orlicz/polynomial.hpp"
#include "orlicz/random_field.hpp"

#include <vector>

namespace orlicz {

/// H_α = δ^α 1, built by applying δᵢ αᵢ times to the constant series.
HermiteSeries hermite(const MultiIndex& alpha);

/// The same basis element in monomial form, by iterating δᵢp = xᵢp - ∂ᵢp.
Polynomial hermite_polynomial(const MultiIndex& alpha);

/// ∂ᵢ on a Hermite series (coefficient transport).
HermiteSeries partial(int axis, const HermiteSeries& s);

/// δᵢf = xᵢf - ∂ᵢf; throws DomainError when f has no weak gradient.
RandomField divergence(int axis, const RandomField& f);

/// δ·V = Σᵢ δᵢVᵢ for a vector field V.
RandomField divergence(const std::vector<RandomField>& v);

/// δ·∇g = x·∇g - Δg
RandomField divergence_of_gradient(const RandomField& g);

struct IbpReport {
  Estimate lhs;  // E[f ∂ᵢg]
  Estimate rhs;  // E[δᵢf g]
  double residual;
};

IbpReport ibp_check(const RandomField& f, const RandomField& g, int axis, const GaussianIntegrator& I);

struct Expansion {
  HermiteSeries series;                  // c_α = E[f H_α] / α!, |α| ≤ degree
  double second_moment = 0.0;            // E[f²]
  std::vector<double> error_by_degree;   // E[f²] - Σ_{|α|≤d} α! c_α², d = 0..degree
  double reconstruction_error = 0.0;     // E[(f - Σ c_α H_α)²] by quadrature
  std::string integrator;
};

/// Hermite expansion up to total degree `degree`. Polynomial fields are
/// integrated with a Gauss-Hermite rule exact for the products involved.
Expansion expand(const RandomField& f, int degree, const GaussianIntegrator& I);

}  // namespace orlicz
