#include "orlicz/hermite_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace orlicz {

HermiteSeries hermite(const MultiIndex& alpha) {
  const int n = static_cast<int>(alpha.size());
  if (n < 1) throw std::invalid_argument("hermite: empty multi-index");
  HermiteSeries h = HermiteSeries::basis(MultiIndex(n, 0));
  for (int i = 0; i < n; ++i) {
    if (alpha[i] < 0) throw std::invalid_argument("hermite: negative index");
    for (int k = 0; k < alpha[i]; ++k) h = h.divergence(i);
  }
  return h;
}

Polynomial hermite_polynomial(const MultiIndex& alpha) {
  const int n = static_cast<int>(alpha.size());
  if (n < 1) throw std::invalid_argument("hermite_polynomial: empty multi-index");
  Polynomial p = Polynomial::constant(n, 1.0);
  for (int i = 0; i < n; ++i) {
    if (alpha[i] < 0) throw std::invalid_argument("hermite_polynomial: negative index");
    for (int k = 0; k < alpha[i]; ++k) p = p.divergence(i);
  }
  return p;
}

HermiteSeries partial(int axis, const HermiteSeries& s) { return s.partial(axis); }

RandomField divergence(int axis, const RandomField& f) {
  if (!f.differentiable()) throw DomainError("divergence: field has no weak gradient");
  return RandomField::coordinate(f.dim(), axis) * f - f.partial(axis);
}

RandomField divergence(const std::vector<RandomField>& v) {
  if (v.empty()) throw std::invalid_argument("divergence: empty vector field");
  const int n = v.front().dim();
  if (static_cast<int>(v.size()) != n) throw DimensionMismatch("divergence: vector field needs one component per axis");
  std::vector<std::pair<double, RandomField>> terms;
  for (int i = 0; i < n; ++i) terms.emplace_back(1.0, divergence(i, v[i]));
  return RandomField::affine(std::move(terms));
}

RandomField divergence_of_gradient(const RandomField& g) { return divergence(g.gradient()); }

IbpReport ibp_check(const RandomField& f, const RandomField& g, int axis, const GaussianIntegrator& I) {
  IbpReport r{expect(I, f * g.partial(axis)), expect(I, divergence(axis, f) * g), 0.0};
  if (r.lhs.diverged() || r.rhs.diverged())
    r.residual = std::numeric_limits<double>::infinity();
  else
    r.residual = std::abs(r.lhs.value() - r.rhs.value());
  return r;
}

Expansion expand(const RandomField& f, int degree, const GaussianIntegrator& I) {
  if (degree < 0) throw std::invalid_argument("expand: degree must be ≥ 0");
  if (f.dim() != I.dim()) throw DimensionMismatch("expand: field and integrator dimensions differ");
  const int n = f.dim();

  // Polynomial f: a Gauss-Hermite rule with 2m-1 ≥ degree + 2 deg f is exact.
  std::optional<GaussianIntegrator> exact;
  if (auto p = f.as_polynomial()) {
    const int order = std::clamp((degree + 2 * p->degree()) / 2 + 2, 2, 256);
    if (n <= 3) exact.emplace(GaussianIntegrator::quadrature(n, order));
  }
  const GaussianIntegrator& J = exact ? *exact : I;

  Expansion out;
  out.integrator = J.description();
  const Estimate m2 = expect(J, f * f);
  if (m2.diverged()) throw DomainError("expand: f is not in L²(γ) (" + m2.reason() + ")");
  out.second_moment = m2.value();

  HermiteSeries::Coefficients coeffs;
  std::vector<double> energy_by_degree(degree + 1, 0.0);
  for (const auto& alpha : multi_indices_up_to(n, degree)) {
    const auto H = RandomField::hermite(HermiteSeries::basis(alpha));
    const Estimate e = expect(J, f * H);
    const double c = e.value() / multi_factorial(alpha);
    if (c != 0.0) coeffs[alpha] = c;
    energy_by_degree[total_degree(alpha)] += multi_factorial(alpha) * c * c;
  }
  double acc = 0.0;
  for (int d = 0; d <= degree; ++d) {
    acc += energy_by_degree[d];
    out.error_by_degree.push_back(std::max(0.0, out.second_moment - acc));
  }
  out.series = HermiteSeries(n, std::move(coeffs));
  const RandomField diff = f - RandomField::hermite(out.series);
  const Estimate err = expect(J, diff * diff);
  out.reconstruction_error = err.value_or(std::numeric_limits<double>::infinity());
  return out;
}

}  // namespace orlicz
