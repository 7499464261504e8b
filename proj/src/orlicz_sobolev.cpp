#include "orlicz/orlicz_sobolev.hpp"

#include "orlicz/estimate.hpp"
#include "orlicz/quadrature_rules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace orlicz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_dim(const RandomField& f, const GaussianIntegrator& I, const char* what) {
  if (f.dim() != I.dim()) throw DimensionMismatch(std::string(what) + ": field and integrator dimensions differ");
}

SobolevReport assemble(NormResult f_norm, std::vector<NormResult> grads) {
  SobolevReport r;
  r.f_norm = std::move(f_norm);
  r.grad_norms = std::move(grads);
  r.member = !r.f_norm.diverged;
  if (r.f_norm.diverged) r.reason = "f: " + r.f_norm.reason;
  double total = r.f_norm.diverged ? 0.0 : r.f_norm.value;
  for (std::size_t i = 0; i < r.grad_norms.size(); ++i) {
    const NormResult& g = r.grad_norms[i];
    if (g.diverged) {
      if (r.member) r.reason = "d" + std::to_string(i + 1) + "f: " + g.reason;
      r.member = false;
    } else {
      total += g.value;
    }
  }
  r.total = r.member ? total : kInf;
  return r;
}

NormResult weighted_norm(const RandomField& f, const RandomField& p, const YoungFunction& phi,
                         const GaussianIntegrator& I) {
  if (f.is_zero()) {
    NormResult zero;
    zero.method = "luxemburg:zero";
    return zero;
  }
  const std::vector<Ball> balls = collect_balls({&f, &p});
  return luxemburg_from_modular([&](double rho) {
    return I.integrate([&](const Eigen::VectorXd& x) { return phi(std::abs(f(x)) / rho) * p(x); }, balls);
  });
}

double lebesgue_norm(const RandomField& f, double alpha, const GaussianIntegrator& I) {
  if (f.is_zero()) return 0.0;
  const Estimate e = expect_transform(I, f, [alpha](double v) { return std::pow(std::abs(v), alpha); });
  return e.diverged() ? kInf : std::pow(e.value(), 1.0 / alpha);
}

RandomField directional(const std::vector<RandomField>& grad, const Eigen::VectorXd& h) {
  std::vector<std::pair<double, RandomField>> terms;
  for (std::size_t i = 0; i < grad.size(); ++i)
    if (h(static_cast<Eigen::Index>(i)) != 0.0) terms.emplace_back(h(static_cast<Eigen::Index>(i)), grad[i]);
  if (terms.empty()) return RandomField::constant(static_cast<int>(h.size()), 0.0);
  return RandomField::affine(std::move(terms));
}

// ∫₀¹ (τ_{-sth}∇f - ∇f)·h ds by Gauss-Legendre in s
RandomField averaged_increment(const std::vector<RandomField>& grad, const Eigen::VectorXd& h, double t, int order) {
  const RandomField dh = directional(grad, h);
  const QuadratureRule<double> rule = gauss_legendre_rule<double>(order);
  std::vector<std::pair<double, RandomField>> terms;
  for (Eigen::Index k = 0; k < rule.nodes.size(); ++k)
    terms.emplace_back(rule.weights(k), RandomField::translate(dh, -rule.nodes(k) * t * h));
  terms.emplace_back(-1.0, dh);
  return RandomField::affine(std::move(terms));
}

RandomField first_order_remainder(const RandomField& f, const std::vector<RandomField>& grad, const Eigen::VectorXd& h,
                                  double t) {
  return RandomField::affine(
      {{1.0, RandomField::translate(f, -t * h)}, {-1.0, f}, {-t, directional(grad, h)}});
}

// x_i φ - ∂_i φ
RandomField divergence_of(const RandomField& phi, int axis) {
  return RandomField::affine(
      {{1.0, RandomField::coordinate(phi.dim(), axis) * phi}, {-1.0, phi.partial(axis)}});
}

double pairing(const RandomField& a, const RandomField& b, const GaussianIntegrator& I) {
  const Estimate e = expect(I, a * b);
  if (e.diverged()) throw DomainError("weak derivative pairing diverged: " + e.reason());
  return e.value();
}

}  // namespace

SobolevReport sobolev_membership(const RandomField& f, const GaussianIntegrator& I) {
  check_dim(f, I, "sobolev_membership");
  const YoungFunction phi = YoungFunction::cosh2();
  const YoungFunction phi_sq = YoungFunction::squared(phi);
  NormResult fn = luxemburg_norm(f, phi, I);
  std::vector<NormResult> grads;
  for (const RandomField& g : f.gradient()) grads.push_back(luxemburg_norm(g, phi_sq, I));
  return assemble(std::move(fn), std::move(grads));
}

SobolevReport sobolev_membership_under(const RandomField& f, const RandomField& p, const GaussianIntegrator& I) {
  check_dim(f, I, "sobolev_membership_under");
  check_dim(p, I, "sobolev_membership_under");
  for (const Eigen::VectorXd& x : I.probe_points())
    if (!(p(x) > 0.0)) throw DomainError("sobolev_membership_under: density must be strictly positive");
  const YoungFunction phi = YoungFunction::cosh2();
  const YoungFunction phi_sq = YoungFunction::squared(phi);
  NormResult fn = weighted_norm(f, p, phi, I);
  std::vector<NormResult> grads;
  for (const RandomField& g : f.gradient()) grads.push_back(weighted_norm(g, p, phi_sq, I));
  return assemble(std::move(fn), std::move(grads));
}

std::vector<RandomField> default_bumps(int dim) {
  std::vector<RandomField> out;
  for (double s : {1.0, 0.5})
    for (double c : {-1.5, -0.5, 0.0, 0.5, 1.5}) {
      Eigen::VectorXd center = Eigen::VectorXd::Zero(dim);
      center(0) = c;
      out.push_back(bump(center, s));
    }
  return out;
}

WeakDerivativeReport weak_derivative_check(const RandomField& f, int axis, const std::vector<RandomField>& bumps,
                                           const GaussianIntegrator& I, const std::optional<RandomField>& claimed) {
  check_dim(f, I, "weak_derivative_check");
  if (axis < 0 || axis >= f.dim()) throw std::invalid_argument("weak_derivative_check: axis out of range");
  const RandomField g = claimed ? *claimed : f.partial(axis);
  check_dim(g, I, "weak_derivative_check");
  WeakDerivativeReport r;
  for (const RandomField& phi : bumps) {
    const double res = std::abs(pairing(g, phi, I) - pairing(f, divergence_of(phi, axis), I));
    r.residuals.push_back(res);
    r.max_residual = std::max(r.max_residual, res);
  }
  return r;
}

IncrementReport translation_increment_check(const RandomField& f, const Eigen::VectorXd& h, double t,
                                            const GaussianIntegrator& I, std::vector<double> alphas) {
  check_dim(f, I, "translation_increment_check");
  if (h.size() != f.dim()) throw DimensionMismatch("translation_increment_check: h has the wrong length");
  if (!(t > 0.0)) throw std::invalid_argument("translation_increment_check: t must be positive");
  const std::vector<RandomField> grad = f.gradient();
  const RandomField r1 = first_order_remainder(f, grad, h, t);
  const RandomField r1_half = first_order_remainder(f, grad, h, t / 2.0);
  const RandomField id16 = r1 - t * averaged_increment(grad, h, t, 16);
  const RandomField id8 = r1 - t * averaged_increment(grad, h, t, 8);

  IncrementReport report;
  for (double alpha : alphas) {
    IncrementRow row{};
    row.alpha = alpha;
    row.remainder = lebesgue_norm(r1, alpha, I);
    row.remainder_half = lebesgue_norm(r1_half, alpha, I);
    row.identity_residual = lebesgue_norm(id16, alpha, I);
    row.identity_residual_gl8 = lebesgue_norm(id8, alpha, I);
    row.ratio = row.remainder <= 1e-14 ? 0.0 : row.remainder_half / row.remainder;
    row.superlinear = row.ratio <= 0.6;
    const bool identity_ok = row.identity_residual <= report.tolerance * std::max(1.0, row.remainder);
    report.pass = report.pass && identity_ok && row.superlinear;
    report.rows.push_back(row);
  }
  return report;
}

CompositionReport lipschitz_composition(Activation g, const RandomField& f, const GaussianIntegrator& I) {
  check_dim(f, I, "lipschitz_composition");
  const std::optional<double> slope = activation_slope_bound(g);
  if (!slope) throw DomainError("lipschitz_composition: " + std::string(activation_name(g)) + " has unbounded slope");
  if (!activation_weakly_differentiable(g))
    throw DomainError("lipschitz_composition: " + std::string(activation_name(g)) + " has no weak derivative");

  CompositionReport r;
  r.lipschitz_constant = *slope;
  for (int i = -400; i <= 400; ++i) {
    const double t = i / 20.0;
    for (double step : {1e-3, 0.1, 1.0}) {
      if (std::abs(apply(g, t - step) - apply(g, t)) > *slope * step * (1.0 + 1e-12) + 1e-15)
        r.lipschitz_holds = false;
    }
  }

  const RandomField composed = RandomField::compose(g, f);
  r.membership = sobolev_membership(composed, I);
  const std::vector<RandomField> bumps = default_bumps(f.dim());
  for (int axis = 0; axis < f.dim(); ++axis) {
    const RandomField chain = composed.partial(axis);
    for (const RandomField& phi : bumps) {
      const double res = std::abs(pairing(chain, phi, I) - pairing(composed, divergence_of(phi, axis), I));
      r.chain_residual = std::max(r.chain_residual, res);
    }
  }
  return r;
}

RandomField neuron_field(const Eigen::MatrixXd& weights, const Eigen::VectorXd& biases,
                         const Eigen::VectorXd& amplitudes, Activation g, const std::vector<RandomField>& inputs) {
  if (inputs.empty()) throw std::invalid_argument("neuron: no inputs");
  if (weights.cols() != static_cast<Eigen::Index>(inputs.size()) || weights.rows() != biases.size() ||
      weights.rows() != amplitudes.size())
    throw DimensionMismatch("neuron: W must be units × inputs with one bias and one amplitude per unit");
  const int dim = inputs.front().dim();
  for (const RandomField& f : inputs)
    if (f.dim() != dim) throw DimensionMismatch("neuron: inputs have different dimensions");
  std::vector<std::pair<double, RandomField>> units;
  for (Eigen::Index i = 0; i < weights.rows(); ++i) {
    if (amplitudes(i) == 0.0) continue;
    std::vector<std::pair<double, RandomField>> pre;
    for (Eigen::Index j = 0; j < weights.cols(); ++j)
      if (weights(i, j) != 0.0) pre.emplace_back(weights(i, j), inputs[static_cast<std::size_t>(j)]);
    const RandomField arg = pre.empty() ? RandomField::constant(dim, -biases(i))
                                        : RandomField::affine(std::move(pre), -biases(i));
    units.emplace_back(amplitudes(i), RandomField::compose(g, arg));
  }
  if (units.empty()) return RandomField::constant(dim, 0.0);
  return RandomField::affine(std::move(units));
}

SobolevReport neuron(const Eigen::MatrixXd& weights, const Eigen::VectorXd& biases, const Eigen::VectorXd& amplitudes,
                     Activation g, const std::vector<RandomField>& inputs, const GaussianIntegrator& I) {
  if (!activation_slope_bound(g))
    throw DomainError("neuron: " + std::string(activation_name(g)) + " has unbounded slope");
  return sobolev_membership(neuron_field(weights, biases, amplitudes, g, inputs), I);
}

EmbeddingReport local_embedding_bound(const RandomField& f, double radius, int k, const GaussianIntegrator& I) {
  check_dim(f, I, "local_embedding_bound");
  if (!(radius > 0.0)) throw std::invalid_argument("local_embedding_bound: radius must be positive");
  if (k < 1) throw std::invalid_argument("local_embedding_bound: k must be at least 1");
  const int n = f.dim();
  const double power = 2.0 * k;
  const double volume_factor = std::pow(2.0 * std::numbers::pi, n / 2.0);

  std::vector<Ball> balls = f.truncation_balls();
  balls.push_back(Ball{Eigen::VectorXd::Zero(n), radius});
  const Estimate lhs = I.integrate(
      [&](const Eigen::VectorXd& x) {
        const double r2 = x.squaredNorm();
        if (r2 > radius * radius) return 0.0;
        return std::pow(std::abs(f(x)), power) * volume_factor * std::exp(r2 / 2.0);
      },
      balls);
  if (lhs.diverged()) throw DomainError("local_embedding_bound: local integral diverged: " + lhs.reason());

  EmbeddingReport r;
  r.lhs = lhs.value();
  const NormResult norm = luxemburg_norm(f, YoungFunction::cosh2(), I);
  const double factorial = std::exp(std::lgamma(power + 1.0));
  const double scale = volume_factor * factorial * std::exp(radius * radius / 2.0);
  if (norm.diverged) {
    r.norm = kInf;
    r.rhs = kInf;
    r.rhs_homogeneous = kInf;
  } else {
    r.norm = norm.value;
    r.rhs = scale * norm.value;
    r.rhs_homogeneous = scale * std::pow(norm.value, power);
  }
  r.pass = r.lhs <= r.rhs * (1.0 + 1e-9);
  r.pass_homogeneous = r.lhs <= r.rhs_homogeneous * (1.0 + 1e-9);
  return r;
}

std::vector<double> continuity_probe(const RandomField& f, const Eigen::VectorXd& x0, const std::vector<double>& radii) {
  const int n = f.dim();
  if (x0.size() != n) throw DimensionMismatch("continuity_probe: x0 has the wrong length");
  std::vector<Eigen::VectorXd> dirs;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e(i) = 1.0;
    dirs.push_back(e);
    dirs.push_back(-e);
  }
  const Eigen::VectorXd diag = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
  dirs.push_back(diag);
  dirs.push_back(-diag);
  const double f0 = f(x0);
  std::vector<double> out;
  for (double r : radii) {
    double sup = 0.0;
    for (const Eigen::VectorXd& d : dirs)
      for (double frac : {0.125, 0.25, 0.5, 0.75, 1.0}) sup = std::max(sup, std::abs(f(x0 + frac * r * d) - f0));
    out.push_back(sup);
  }
  return out;
}

}  // namespace orlicz
