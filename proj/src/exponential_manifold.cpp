#include "orlicz/exponential_manifold.hpp"

#include "orlicz/hermite_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace orlicz {

namespace {

void require_dim(const RandomField& f, const GaussianIntegrator& I, const char* what) {
  if (f.dim() != I.dim()) throw DimensionMismatch(std::string(what) + ": field and integrator dimensions differ");
}

double finite_or_throw(const Estimate& e, const std::string& what) {
  if (e.diverged()) throw DomainError(what + " diverged (" + e.reason() + ")");
  return e.value();
}

RandomField centered(const RandomField& u, const GaussianIntegrator& I, bool auto_center, const char* what) {
  const double m = finite_or_throw(expect(I, u), std::string(what) + ": E[u]");
  if (std::abs(m) <= kCenterTol) return u;
  if (!auto_center) {
    std::ostringstream os;
    os << what << ": u is not centered (E[u] = " << m << "); pass auto_center to subtract the mean";
    throw DomainError(os.str());
  }
  return u - m;
}

// Probe points where densities are compared; the far tail is excluded so
// relative comparisons are not dominated by underflow.
std::vector<Eigen::VectorXd> comparison_points(const GaussianIntegrator& I) {
  std::vector<Eigen::VectorXd> pts;
  for (auto& x : I.probe_points())
    if (x.lpNorm<Eigen::Infinity>() <= 8.0) pts.push_back(std::move(x));
  return pts;
}

}  // namespace

Estimate k1(const RandomField& u, const GaussianIntegrator& I, bool auto_center) {
  require_dim(u, I, "k1");
  const RandomField v = centered(u, I, auto_center, "k1");
  const Estimate z = expect_transform(I, v, [](double t) { return std::exp(t); });
  if (z.diverged()) return Estimate::divergent("outside the proper domain: " + z.reason());
  return Estimate::finite(std::log(z.value()), z.error_bound() / z.value());
}

ExpModelPoint ExpModelPoint::make(const RandomField& u, const GaussianIntegrator& I, bool auto_center) {
  require_dim(u, I, "ExpModelPoint");
  const RandomField v = centered(u, I, auto_center, "ExpModelPoint");
  const Estimate k = orlicz::k1(v, I);
  if (k.diverged()) throw DomainError("ExpModelPoint: " + k.reason());
  return ExpModelPoint(v, k.value());
}

ExpModelPoint ExpModelPoint::reference(int dim) { return ExpModelPoint(RandomField::constant(dim, 0.0), 0.0); }

BundleElement make_bundle_element(const ExpModelPoint& base, const RandomField& v, const GaussianIntegrator& I) {
  const double m = finite_or_throw(expect_under(I, v, base.density()), "bundle element: E_q[v]");
  if (std::abs(m) > kCenterTol) {
    std::ostringstream os;
    os << "bundle element: v is not centered under the base density (E_q[v] = " << m << ")";
    throw DomainError(os.str());
  }
  return {base, v};
}

RandomField chart(const RandomField& q, const GaussianIntegrator& I, double norm_tol) {
  require_dim(q, I, "chart");
  for (const auto& x : I.probe_points())
    if (!(q(x) > 0.0)) throw DomainError("chart: density is not strictly positive at a probe point");
  const double mass = finite_or_throw(expect(I, q), "chart: E[q]");
  if (std::abs(mass - 1.0) > norm_tol) {
    std::ostringstream os;
    os << "chart: density is not normalized (E[q] = " << mass << ")";
    throw DomainError(os.str());
  }
  const RandomField log_q = RandomField::compose(Activation::Log, q);
  const double m = finite_or_throw(expect(I, log_q), "chart: E[log q]");
  return log_q - m;
}

RelativeCumulant relative_cumulant(const ExpModelPoint& p, const RandomField& u, const GaussianIntegrator& I,
                                   bool auto_center) {
  require_dim(u, I, "relative_cumulant");
  const RandomField dens = p.density();
  RandomField v = u;
  const double m = finite_or_throw(expect_under(I, u, dens), "relative_cumulant: E_p[u]");
  if (std::abs(m) > kCenterTol) {
    if (!auto_center) {
      std::ostringstream os;
      os << "relative_cumulant: u is not centered under p (E_p[u] = " << m << ")";
      throw DomainError(os.str());
    }
    v = u - m;
  }
  RelativeCumulant out{Estimate::divergent("not computed"), 0.0};
  const Estimate z = expect_under(I, RandomField::compose(Activation::Exp, v), dens);
  if (z.diverged()) {
    out.value = Estimate::divergent("outside the proper domain at p: " + z.reason());
    return out;
  }
  const double kp = std::log(z.value());
  out.value = Estimate::finite(kp, z.error_bound() / z.value());

  // e^{v - K_p(v)} p against exp(w - K₁(w)) with w = u_p + v recentered under γ
  const ExpModelPoint composite = ExpModelPoint::make(p.u() + v, I, true);
  const RandomField lhs = RandomField::compose(Activation::Exp, v - kp + p.log_density());
  const RandomField rhs = composite.density();
  for (const auto& x : comparison_points(I)) {
    const double a = lhs(x), b = rhs(x);
    out.chain_residual = std::max(out.chain_residual, std::abs(a - b) / std::max(1.0, std::abs(b)));
  }
  return out;
}

RandomField ExpFamily::combination(const Eigen::VectorXd& theta) const {
  if (stats.empty()) throw std::invalid_argument("ExpFamily: no statistics");
  if (theta.size() != static_cast<Eigen::Index>(stats.size()))
    throw DimensionMismatch("ExpFamily: θ has the wrong length");
  std::vector<std::pair<double, RandomField>> terms;
  for (std::size_t i = 0; i < stats.size(); ++i) terms.emplace_back(theta(static_cast<Eigen::Index>(i)), stats[i]);
  return RandomField::affine(std::move(terms));
}

double cumulant(const ExpFamily& F, const Eigen::VectorXd& theta, const GaussianIntegrator& I) {
  const Estimate z = expect_transform(I, F.combination(theta), [](double t) { return std::exp(t); });
  if (z.diverged()) {
    std::ostringstream os;
    os << "κ diverges at θ = (" << theta.transpose() << "): outside the proper domain";
    throw DomainError(os.str());
  }
  return std::log(z.value());
}

namespace {

void check_family(const ExpFamily& F, const GaussianIntegrator& I) {
  for (const auto& u : F.stats) {
    require_dim(u, I, "ExpFamily");
    const double m = finite_or_throw(expect(I, u), "ExpFamily: E[u]");
    if (std::abs(m) > kCenterTol) {
      std::ostringstream os;
      os << "ExpFamily: statistic is not centered (E[u] = " << m << ")";
      throw DomainError(os.str());
    }
  }
}

}  // namespace

FisherReport cumulant_and_fisher(const ExpFamily& F, const Eigen::VectorXd& theta, const GaussianIntegrator& I,
                                 double step) {
  check_family(F, I);
  const Eigen::Index d = theta.size();
  FisherReport r;
  r.step = step;
  r.kappa = cumulant(F, theta, I);
  const RandomField p = RandomField::compose(Activation::Exp, F.combination(theta) - r.kappa);
  r.gradient.resize(d);
  for (Eigen::Index i = 0; i < d; ++i)
    r.gradient(i) = finite_or_throw(expect_under(I, F.stats[i], p), "E_p[u]");
  r.fisher_covariance.resize(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i; j < d; ++j) {
      const RandomField c = (F.stats[i] - r.gradient(i)) * (F.stats[j] - r.gradient(j));
      r.fisher_covariance(i, j) = r.fisher_covariance(j, i) = finite_or_throw(expect_under(I, c, p), "covariance");
    }

  auto hessian = [&](double h) {
    Eigen::MatrixXd H(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = i; j < d; ++j) {
        Eigen::VectorXd a = Eigen::VectorXd::Zero(d), b = Eigen::VectorXd::Zero(d);
        a(i) += h;
        a(j) += h;
        b(i) += h;
        b(j) -= h;
        const double v = (cumulant(F, theta + a, I) - cumulant(F, theta + b, I) - cumulant(F, theta - b, I) +
                          cumulant(F, theta - a, I)) /
                         (4.0 * h * h);
        H(i, j) = H(j, i) = v;
      }
    return H;
  };
  r.fisher_hessian = (4.0 * hessian(0.5 * step) - hessian(step)) / 3.0;
  r.max_difference = (r.fisher_covariance - r.fisher_hessian).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(r.fisher_covariance, Eigen::EigenvaluesOnly);
  r.positive_semidefinite = eig.eigenvalues().minCoeff() >= -1e-10;
  return r;
}

DerivativeCheck expectation_derivative_check(const ExpFamily& F, const Eigen::VectorXd& theta, const RandomField& f,
                                             const GaussianIntegrator& I, double step) {
  check_family(F, I);
  require_dim(f, I, "expectation_derivative_check");
  const Eigen::Index d = theta.size();
  auto mean_at = [&](const Eigen::VectorXd& t) {
    const double kappa = cumulant(F, t, I);
    const RandomField p = RandomField::compose(Activation::Exp, F.combination(t) - kappa);
    return finite_or_throw(expect_under(I, f, p), "E_p[f]");
  };
  DerivativeCheck out;
  out.finite_difference.resize(d);
  out.covariance.resize(d);
  const double kappa = cumulant(F, theta, I);
  const RandomField p = RandomField::compose(Activation::Exp, F.combination(theta) - kappa);
  const double mean_f = finite_or_throw(expect_under(I, f, p), "E_p[f]");
  for (Eigen::Index i = 0; i < d; ++i) {
    auto central = [&](double h) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
      e(i) = h;
      return (mean_at(theta + e) - mean_at(theta - e)) / (2.0 * h);
    };
    out.finite_difference(i) = (4.0 * central(0.5 * step) - central(step)) / 3.0;
    const double g = finite_or_throw(expect_under(I, F.stats[i], p), "E_p[u]");
    out.covariance(i) = finite_or_throw(expect_under(I, (f - mean_f) * (F.stats[i] - g), p), "covariance");
  }
  out.residual = (out.finite_difference - out.covariance).cwiseAbs().maxCoeff();
  return out;
}

Estimate hyvarinen(const ExpModelPoint& p, const ExpModelPoint& q, const GaussianIntegrator& I) {
  if (p.dim() != q.dim()) throw DimensionMismatch("hyvarinen: points live in different dimensions");
  if (!p.u().differentiable() || !q.u().differentiable()) throw DomainError("hyvarinen: missing gradients");
  std::vector<std::pair<double, RandomField>> terms;
  for (int i = 0; i < p.dim(); ++i) {
    const RandomField diff = p.u().partial(i) - q.u().partial(i);
    terms.emplace_back(0.5, diff * diff);
  }
  const Estimate e = expect_under(I, RandomField::affine(std::move(terms)), p.density());
  if (e.diverged()) return e;
  return Estimate::finite(std::max(0.0, e.value()), e.error_bound());
}

OttoReport otto_inner(const RandomField& f, const RandomField& g, const ExpModelPoint& p, const GaussianIntegrator& I) {
  require_dim(f, I, "otto_inner");
  require_dim(g, I, "otto_inner");
  if (!f.differentiable() || !g.differentiable()) throw DomainError("otto_inner: missing gradients");
  const RandomField dens = p.density();
  OttoReport r{Estimate::divergent(""), Estimate::divergent(""), 0.0, Estimate::divergent(""), 0.0, 0.0};
  r.mean_f = finite_or_throw(expect_under(I, f, dens), "E_p[f]");
  r.mean_g = finite_or_throw(expect_under(I, g, dens), "E_p[g]");
  const RandomField fc = f - r.mean_f;
  const RandomField gc = g - r.mean_g;

  std::vector<std::pair<double, RandomField>> terms;
  std::vector<RandomField> flux;  // p ∇g
  for (int i = 0; i < f.dim(); ++i) {
    terms.emplace_back(1.0, fc.partial(i) * gc.partial(i));
    flux.push_back(dens * gc.partial(i));
  }
  r.value = expect_under(I, RandomField::affine(std::move(terms)), dens);
  r.adjoint = expect(I, fc * divergence(flux));
  r.literal_adjoint = expect(I, fc * divergence_of_gradient(gc * dens));
  r.adjoint_residual = r.value.diverged() || r.adjoint.diverged() ? std::numeric_limits<double>::infinity()
                                                                  : std::abs(r.value.value() - r.adjoint.value());
  return r;
}

LogSobolevReport log_sobolev_check(const ExpModelPoint& p, const GaussianIntegrator& I) {
  if (!p.u().differentiable()) throw DomainError("log_sobolev_check: missing gradient");
  const RandomField dens = p.density();
  LogSobolevReport r;
  r.entropy = finite_or_throw(expect_under(I, p.log_density(), dens), "entropy");
  // |∇√p|² = ¼|∇u|² p
  std::vector<std::pair<double, RandomField>> terms;
  for (int i = 0; i < p.dim(); ++i) {
    const RandomField du = p.u().partial(i);
    terms.emplace_back(0.5, du * du);
  }
  r.energy = finite_or_throw(expect_under(I, RandomField::affine(std::move(terms)), dens), "energy");
  r.slack = r.energy - r.entropy;
  return r;
}

namespace {

void require_positive(const RandomField& f, const GaussianIntegrator& I, const char* what) {
  for (const auto& x : I.probe_points())
    if (!(f(x) > 0.0)) throw DomainError(std::string(what) + " is not strictly positive at a probe point");
}

}  // namespace

SpherePoint bundle_to_sphere(const RandomField& p, const RandomField& u, const GaussianIntegrator& I) {
  require_dim(p, I, "bundle_to_sphere");
  require_positive(p, I, "bundle_to_sphere: p");
  const RandomField root = RandomField::compose(Activation::Sqrt, p);
  return {2.0 * root, u * root};
}

BundlePoint sphere_to_bundle(const RandomField& P, const RandomField& P_dot, const GaussianIntegrator& I) {
  require_dim(P, I, "sphere_to_bundle");
  require_positive(P, I, "sphere_to_bundle: P");
  return {0.25 * (P * P), 2.0 * (P_dot * RandomField::compose(Activation::Reciprocal, P))};
}

SphereCheck sphere_check(const RandomField& p, const RandomField& u1, const RandomField& u2,
                         const GaussianIntegrator& I) {
  SphereCheck c;
  const SpherePoint s1 = bundle_to_sphere(p, u1, I);
  const SpherePoint s2 = bundle_to_sphere(p, u2, I);
  c.mass = finite_or_throw(expect(I, p), "∫p");
  c.mean_u1 = finite_or_throw(expect_under(I, u1, p), "E_p[u1]");
  c.mean_u2 = finite_or_throw(expect_under(I, u2, p), "E_p[u2]");
  c.fisher_bundle = finite_or_throw(expect_under(I, u1 * u2, p), "E_p[u1 u2]");
  c.fisher_sphere = finite_or_throw(expect(I, s1.P_dot * s2.P_dot), "∫Ṗ1Ṗ2");
  const BundlePoint back = sphere_to_bundle(s1.P, s1.P_dot, I);
  for (const auto& x : comparison_points(I)) {
    const double dp = std::abs(back.p(x) - p(x)) / std::max(1.0, std::abs(p(x)));
    const double du = std::abs(back.u(x) - u1(x)) / std::max(1.0, std::abs(u1(x)));
    c.roundtrip = std::max({c.roundtrip, dp, du});
  }
  return c;
}

PortmanteauReport portmanteau_check(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  return exact_portmanteau(p, q);
}

}  // namespace orlicz
