#include "orlicz/orlicz_norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace orlicz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double as_number(const Estimate& e) { return e.diverged() ? kInf : e.value(); }

// Compares log Φ(|f|/ρ) against the Gaussian exponent far beyond the
// integrator's own tail probe, along the axes and the diagonal.
bool outgrows_far_tail(const RandomField& f, const YoungFunction& phi, double rho) {
  const int n = f.dim();
  std::vector<Eigen::VectorXd> dirs;
  for (int i = 0; i < n; ++i) {
    dirs.push_back(Eigen::VectorXd::Unit(n, i));
    dirs.push_back(-Eigen::VectorXd::Unit(n, i));
  }
  dirs.push_back(Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n))));
  dirs.push_back(-dirs.back());
  for (const auto& d : dirs) {
    double g[2];
    const double radii[2] = {1e3, 1e4};
    for (int k = 0; k < 2; ++k) {
      const double r = radii[k];
      g[k] = phi.log_value(std::abs(f(Eigen::VectorXd(r * d))) / rho) - 0.5 * r * r + (n - 1) * std::log(r);
    }
    if (std::isnan(g[0]) || std::isnan(g[1]) || (std::isinf(g[1]) && g[1] < 0)) continue;
    if (g[1] >= g[0]) return true;
  }
  return false;
}

}  // namespace

NormResult luxemburg_from_modular(const Modular& modular, const LuxemburgOptions& opts) {
  NormResult out;
  out.method = "luxemburg:bisection";
  auto m = [&](double rho) {
    ++out.evaluations;
    return as_number(modular(rho));
  };

  double lo = 1.0;
  double hi = 1.0;
  double m_hi = m(hi);
  if (m_hi > 1.0) {
    int k = 0;
    do {
      lo = hi;
      hi *= 2.0;
      m_hi = m(hi);
      if (++k > opts.max_doublings) {
        out.diverged = true;
        out.reason = "modular exceeds 1 at every probed ρ: not in L^Φ";
        out.bracket_lo = lo;
        out.bracket_hi = kInf;
        return out;
      }
    } while (m_hi > 1.0);
  } else {
    double m_lo = m_hi;
    int k = 0;
    while (m_lo <= 1.0) {
      hi = lo;
      lo *= 0.5;
      m_lo = m(lo);
      if (++k > 1000 || lo == 0.0) {
        // The modular stays ≤ 1 as ρ → 0: f vanishes γ-a.e.
        out.value = 0.0;
        out.method = "luxemburg:zero";
        return out;
      }
    }
  }

  // invariant: m(lo) > 1 ≥ m(hi)
  while (hi - lo > opts.rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (m(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  out.value = 0.5 * (lo + hi);
  out.bracket_lo = lo;
  out.bracket_hi = hi;
  out.residual = std::abs(m(out.value) - 1.0);
  return out;
}

NormResult luxemburg_norm(const RandomField& f, const YoungFunction& phi, const GaussianIntegrator& I,
                          const LuxemburgOptions& opts) {
  if (f.dim() != I.dim()) throw DimensionMismatch("luxemburg_norm: field and integrator dimensions differ");
  if (f.is_zero()) {
    NormResult zero;
    zero.method = "luxemburg:zero";
    return zero;
  }
  NormResult out = luxemburg_from_modular(
      [&](double rho) { return expect_transform(I, f, [&](double v) { return phi(std::abs(v) / rho); }); }, opts);
  if (!out.diverged && out.value > 0.0 && outgrows_far_tail(f, phi, out.value)) {
    out.diverged = true;
    out.reason = "Φ(|f|/ρ) outgrows the Gaussian weight for every ρ: not in L^Φ";
    out.bracket_hi = kInf;
  }
  return out;
}

NormResult dual_norm(const RandomField& f, const YoungFunction& phi, const GaussianIntegrator& I) {
  NormResult out;
  out.method = "amemiya:golden-section";
  if (f.is_zero()) return out;
  const NormResult lux = luxemburg_norm(f, phi, I);
  if (lux.diverged) {
    out.diverged = true;
    out.reason = lux.reason;
    return out;
  }
  if (lux.value == 0.0) return out;
  auto objective = [&](double log_k) {
    ++out.evaluations;
    const double k = std::exp(log_k);
    const Estimate e = expect_transform(I, f, [&](double v) { return phi(k * std::abs(v)); });
    return e.diverged() ? kInf : (1.0 + e.value()) / k;
  };
  // (1 + M(k))/k is quasi-convex in k; search log k on a wide window around 1/ρ.
  double a = std::log(1e-4 / lux.value);
  double b = std::log(1e4 / lux.value);
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = objective(c);
  double fd = objective(d);
  while (b - a > 1e-11) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = objective(d);
    }
  }
  out.value = std::min(fc, fd);
  out.bracket_lo = std::exp(a);  // bracket on the minimizing k
  out.bracket_hi = std::exp(b);
  return out;
}

MomentNormResult moment_norm(const RandomField& f, const GaussianIntegrator& I, int k_max) {
  if (k_max < 1) throw std::invalid_argument("moment_norm: k_max must be ≥ 1");
  MomentNormResult out;
  if (f.is_zero()) {
    out.terms.assign(k_max, 0.0);
    out.argmax = 1;
    return out;
  }
  for (int k = 1; k <= k_max; ++k) {
    const Estimate m = expect_transform(I, f, [k](double v) { return std::pow(v * v, k); });
    if (m.diverged()) {
      out.diverged = true;
      out.diverged_at = k;
      return out;
    }
    const double log_term = (std::log(std::max(m.value(), 0.0)) - std::lgamma(2.0 * k + 1.0)) / (2.0 * k);
    const double term = std::exp(log_term);
    out.terms.push_back(term);
    if (term > out.value) {
      out.value = term;
      out.argmax = k;
    }
  }
  return out;
}

TailCertificate tail_certificate(const RandomField& f, const GaussianIntegrator& I, std::span<const double> t_grid) {
  TailCertificate out;
  out.rho = luxemburg_norm(f, YoungFunction::cosh2(), I);
  if (out.rho.diverged) throw DomainError("tail_certificate: f is not sub-exponential (" + out.rho.reason + ")");
  const double rho = out.rho.value;
  for (double t : t_grid) {
    TailRow row{};
    row.t = t;
    row.bound = rho == 0.0 ? (t >= 0.0 ? 0.0 : 4.0) : 4.0 * std::exp(-t / rho);
    const Estimate p = expect_transform(I, f, [t](double v) { return std::abs(v) > t ? 1.0 : 0.0; });
    row.probability = p.value();
    row.error_bound = p.error_bound();
    row.pass = row.probability <= row.bound;
    out.pass = out.pass && row.pass;
    out.rows.push_back(row);
  }
  return out;
}

std::vector<double> default_lambda_grid() {
  return {0.05, 0.1, 0.25, 0.4, 0.45, 0.49, 0.499, 0.5, 0.501, 0.51, 0.55, 0.75, 1.0, 2.0, 4.0, 8.0};
}

ClassVerdict orlicz_class_member(const RandomField& f, const GaussianIntegrator& I, std::span<const double> lambda_grid) {
  ClassVerdict out;
  for (double lambda : lambda_grid) {
    if (!(lambda > 0.0)) throw std::invalid_argument("orlicz_class_member: λ must be > 0");
    const Estimate e = expect_transform(I, f, [lambda](double v) { return std::exp(lambda * std::abs(v)); });
    out.rows.push_back({lambda, e});
    if (e.diverged()) {
      out.in_M = false;
      if (!out.min_diverged_lambda || lambda < *out.min_diverged_lambda) out.min_diverged_lambda = lambda;
    } else if (!out.max_finite_lambda || lambda > *out.max_finite_lambda) {
      out.max_finite_lambda = lambda;
    }
  }
  return out;
}

std::vector<TruncationRow> truncation_convergence(const RandomField& f, const YoungFunction& phi,
                                                  const GaussianIntegrator& I, std::span<const double> N_list,
                                                  double lambda) {
  std::vector<TruncationRow> out;
  for (double N : N_list) {
    const RandomField remainder = f - RandomField::truncate(f, N);
    out.push_back({N, expect_transform(I, remainder, [&](double v) { return phi(lambda * std::abs(v)); })});
  }
  return out;
}

}  // namespace orlicz
