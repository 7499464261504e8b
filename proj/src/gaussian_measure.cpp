#include "orlicz/gaussian_measure.hpp"

#include "orlicz/detail/gauss_kronrod.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace orlicz {

namespace {

constexpr double kProbeRadii[] = {16.0, 24.0, 32.0};
constexpr std::uint64_t kDirectionSeed = 0x6a09e667f3bcc909ULL;
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

std::vector<Eigen::VectorXd> probe_directions(int n) {
  std::vector<Eigen::VectorXd> dirs;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e(i) = 1.0;
    dirs.push_back(e);
    dirs.push_back(-e);
  }
  if (n > 1) {
    const Eigen::VectorXd diag = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    dirs.push_back(diag);
    dirs.push_back(-diag);
  }
  std::mt19937_64 rng(kDirectionSeed);
  std::normal_distribution<double> normal;
  for (int k = 0; k < 2 * n; ++k) {
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d(i) = normal(rng);
    dirs.push_back(d.normalized());
  }
  return dirs;
}

Estimate guarded(double value, double error, double guard) {
  if (!std::isfinite(value)) return Estimate::divergent("integral is not finite");
  if (std::abs(value) > guard) return Estimate::divergent("integral exceeds the divergence guard");
  return Estimate::finite(value, error);
}

std::vector<double> base_knots(double half_width) {
  std::vector<double> k{0.0, 2.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0};
  std::vector<double> out;
  for (double v : k)
    if (v < half_width) {
      out.push_back(v);
      if (v > 0.0) out.push_back(-v);
    }
  out.push_back(half_width);
  out.push_back(-half_width);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

GaussianIntegrator::GaussianIntegrator(int dim, Backend backend, double divergence_guard)
    : dim_(dim), backend_(std::move(backend)), guard_(divergence_guard) {
  if (dim < 1) throw std::invalid_argument("integrator dimension must be ≥ 1");
  if (!(divergence_guard > 0.0)) throw std::invalid_argument("divergence guard must be > 0");
  if (const auto* gh = std::get_if<GaussHermiteBackend>(&backend_)) {
    if (gh->order < 2 || gh->order > 256) throw std::invalid_argument("Gauss-Hermite order must be in [2, 256]");
    rules_ = std::make_shared<const std::vector<QuadratureRule<double>>>(std::vector<QuadratureRule<double>>{
        gauss_hermite_rule<double>(gh->order), gauss_hermite_rule<double>(gh->order / 2)});
  } else if (const auto* ad = std::get_if<AdaptiveBackend>(&backend_)) {
    if (!(ad->rel_tol > 0.0) || !(ad->half_width > 0.0) || ad->max_segments < 1)
      throw std::invalid_argument("invalid adaptive integrator settings");
  } else if (const auto* mc = std::get_if<MonteCarloBackend>(&backend_)) {
    if (mc->samples < 2) throw std::invalid_argument("Monte Carlo needs at least 2 samples");
    auto samples = std::make_shared<Eigen::MatrixXd>(dim, static_cast<Eigen::Index>(mc->samples));
    std::mt19937_64 rng(mc->seed);
    std::normal_distribution<double> normal;
    for (Eigen::Index j = 0; j < samples->cols(); ++j)
      for (int i = 0; i < dim; ++i) (*samples)(i, j) = normal(rng);
    samples_ = std::move(samples);
  }
  directions_ = std::make_shared<const std::vector<Eigen::VectorXd>>(probe_directions(dim));
}

GaussianIntegrator GaussianIntegrator::standard(int dim) {
  if (dim <= 2) return adaptive(dim);
  if (dim == 3) return quadrature(dim, 64);
  return monte_carlo(dim);
}

GaussianIntegrator GaussianIntegrator::quadrature(int dim, int order) {
  return GaussianIntegrator(dim, GaussHermiteBackend{order});
}

GaussianIntegrator GaussianIntegrator::adaptive(int dim, double rel_tol) {
  AdaptiveBackend b;
  b.rel_tol = rel_tol;
  return GaussianIntegrator(dim, b);
}

GaussianIntegrator GaussianIntegrator::monte_carlo(int dim, std::size_t samples, std::uint64_t seed) {
  return GaussianIntegrator(dim, MonteCarloBackend{samples, seed});
}

std::string GaussianIntegrator::description() const {
  std::ostringstream os;
  std::visit(
      [&](const auto& b) {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, GaussHermiteBackend>)
          os << "gauss_hermite(order=" << b.order << ")";
        else if constexpr (std::is_same_v<B, AdaptiveBackend>)
          os << "adaptive(rel_tol=" << b.rel_tol << ")";
        else
          os << "monte_carlo(samples=" << b.samples << ", seed=" << b.seed << ")";
      },
      backend_);
  return os.str();
}

std::optional<std::string> GaussianIntegrator::tail_divergence(const Integrand& h) const {
  const double n = dim_;
  for (const auto& d : *directions_) {
    double s[3];
    for (int k = 0; k < 3; ++k) {
      const double r = kProbeRadii[k];
      const double v = h(Eigen::VectorXd(r * d));
      if (std::isnan(v)) return "integrand undefined far out in the tail";
      s[k] = std::log(std::abs(v)) - 0.5 * r * r + (n - 1.0) * std::log(r);
    }
    if (std::isinf(s[2]) && s[2] < 0.0) continue;
    if (s[2] >= s[1]) return "integrand outgrows the Gaussian weight";
  }
  return std::nullopt;
}

Estimate GaussianIntegrator::integrate(const Integrand& h, std::span<const Ball> balls) const {
  if (auto reason = tail_divergence(h)) return Estimate::divergent(*reason);
  return std::visit(
      [&](const auto& b) -> Estimate {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, GaussHermiteBackend>)
          return integrate_gauss_hermite(h);
        else if constexpr (std::is_same_v<B, AdaptiveBackend>)
          return integrate_adaptive(h, balls, b);
        else
          return integrate_monte_carlo(h);
      },
      backend_);
}

Estimate GaussianIntegrator::integrate_gauss_hermite(const Integrand& h) const {
  auto tensor = [&](const QuadratureRule<double>& rule) {
    const int m = static_cast<int>(rule.size());
    std::vector<int> idx(dim_, 0);
    Eigen::VectorXd x(dim_);
    double sum = 0.0;
    double comp = 0.0;
    while (true) {
      double w = 1.0;
      for (int i = 0; i < dim_; ++i) {
        x(i) = rule.nodes(idx[i]);
        w *= rule.weights(idx[i]);
      }
      const double term = w * h(x);
      // Neumaier summation
      const double t = sum + term;
      comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
      sum = t;
      int a = dim_ - 1;
      while (a >= 0 && ++idx[a] == m) idx[a--] = 0;
      if (a < 0) break;
    }
    return sum + comp;
  };
  const double full = tensor((*rules_)[0]);
  const double half = tensor((*rules_)[1]);
  return guarded(full, std::abs(full - half), guard_);
}

Estimate GaussianIntegrator::integrate_adaptive(const Integrand& h, std::span<const Ball> balls,
                                                const AdaptiveBackend& b) const {
  const std::vector<double> knots0 = base_knots(b.half_width);
  const double L = b.half_width;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dim_);
  bool finite = true;
  double inner_rel_err = 0.0;

  auto knots_for = [&](int axis) {
    std::vector<double> k = knots0;
    for (const auto& ball : balls) {
      double r2 = ball.radius * ball.radius;
      for (int j = 0; j < axis; ++j) r2 -= (x(j) - ball.center(j)) * (x(j) - ball.center(j));
      if (r2 <= 0.0) continue;
      const double r = std::sqrt(r2);
      for (double t : {ball.center(axis) - r, ball.center(axis) + r})
        if (t > -L && t < L) k.push_back(t);
    }
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end(), [](double p, double q) { return std::abs(p - q) < 1e-13; }), k.end());
    return k;
  };

  // Slices of an odd integrand integrate to roundoff; an absolute floor
  // scaled by a coarse ∫|h| keeps the outer levels from chasing that noise.
  double abs_tol = 1e-300;
  if (dim_ > 1 && dim_ <= 4) {
    static const QuadratureRule<double> coarse = gauss_hermite_rule<double>(16);
    std::vector<int> idx(dim_, 0);
    Eigen::VectorXd y(dim_);
    double mass = 0.0;
    while (true) {
      double w = 1.0;
      for (int i = 0; i < dim_; ++i) {
        y(i) = coarse.nodes(idx[i]);
        w *= coarse.weights(idx[i]);
      }
      mass += w * std::abs(h(y));
      int a = dim_ - 1;
      while (a >= 0 && ++idx[a] == 16) idx[a--] = 0;
      if (a < 0) break;
    }
    if (std::isfinite(mass) && mass > 0.0) abs_tol = std::max(abs_tol, 0.1 * b.rel_tol * mass);
  }

  double outer_error = 0.0;
  std::function<double(int)> level = [&](int axis) -> double {
    auto g = [&](double t) {
      x(axis) = t;
      const double v = axis == dim_ - 1 ? h(x) : level(axis + 1);
      const double w = kInvSqrt2Pi * std::exp(-0.5 * t * t);
      return v == 0.0 ? 0.0 : v * w;
    };
    const auto k = knots_for(axis);
    auto r = detail::adaptive_integrate(g, std::span<const double>(k), abs_tol, b.rel_tol, b.max_segments);
    if (!r.finite) finite = false;
    // Tail beyond ±L, bounded by the edge values over a unit width.
    const double tail = std::abs(g(-L)) + std::abs(g(L));
    const double err = r.error + tail;
    if (axis == 0)
      outer_error = err;
    else if (r.abs_value > 0.0)
      inner_rel_err = std::max(inner_rel_err, err / r.abs_value);
    return r.value;
  };

  const double value = level(0);
  if (!finite) return Estimate::divergent("integrand is not finite at a quadrature node");
  double error = outer_error;
  if (dim_ > 1) error += inner_rel_err * std::abs(value);
  return guarded(value, error, guard_);
}

Estimate GaussianIntegrator::integrate_monte_carlo(const Integrand& h) const {
  const auto& S = *samples_;
  double mean = 0.0;
  double m2 = 0.0;
  Eigen::VectorXd x(dim_);
  for (Eigen::Index j = 0; j < S.cols(); ++j) {
    x = S.col(j);
    const double v = h(x);
    if (!std::isfinite(v)) return Estimate::divergent("integrand is not finite at a sample");
    const double delta = v - mean;
    mean += delta / static_cast<double>(j + 1);
    m2 += delta * (v - mean);
  }
  const double N = static_cast<double>(S.cols());
  const double se = std::sqrt(m2 / (N - 1.0) / N);
  return guarded(mean, se, guard_);
}

std::vector<Eigen::VectorXd> GaussianIntegrator::probe_points() const {
  std::vector<Eigen::VectorXd> pts;
  if (rules_) {
    const auto& rule = (*rules_)[0];
    const int m = static_cast<int>(rule.size());
    std::vector<int> idx(dim_, 0);
    while (true) {
      Eigen::VectorXd x(dim_);
      for (int i = 0; i < dim_; ++i) x(i) = rule.nodes(idx[i]);
      pts.push_back(std::move(x));
      int a = dim_ - 1;
      while (a >= 0 && ++idx[a] == m) idx[a--] = 0;
      if (a < 0) break;
    }
    return pts;
  }
  if (samples_) {
    const Eigen::Index cap = std::min<Eigen::Index>(samples_->cols(), 20000);
    for (Eigen::Index j = 0; j < cap; ++j) pts.emplace_back(samples_->col(j));
    return pts;
  }
  const int per_axis = dim_ <= 3 ? 33 : 5;
  std::vector<int> idx(dim_, 0);
  while (true) {
    Eigen::VectorXd x(dim_);
    for (int i = 0; i < dim_; ++i) x(i) = -8.0 + 16.0 * idx[i] / (per_axis - 1);
    pts.push_back(std::move(x));
    int a = dim_ - 1;
    while (a >= 0 && ++idx[a] == per_axis) idx[a--] = 0;
    if (a < 0) break;
  }
  return pts;
}

std::vector<Ball> collect_balls(std::initializer_list<const RandomField*> fields) {
  std::vector<Ball> out;
  for (const auto* f : fields) {
    auto b = f->truncation_balls();
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

Estimate expect(const GaussianIntegrator& I, const RandomField& f) {
  if (f.dim() != I.dim()) throw DimensionMismatch("expect: field and integrator dimensions differ");
  if (auto c = f.constant_value()) return Estimate::finite(*c, 0.0);
  const auto balls = f.truncation_balls();
  return I.integrate([&](const Eigen::VectorXd& x) { return f(x); }, balls);
}

Estimate expect_transform(const GaussianIntegrator& I, const RandomField& f, const std::function<double(double)>& g) {
  if (f.dim() != I.dim()) throw DimensionMismatch("expect: field and integrator dimensions differ");
  if (auto c = f.constant_value()) {
    const double v = g(*c);
    if (!std::isfinite(v)) return Estimate::divergent("integrand is not finite");
    return Estimate::finite(v, 0.0);
  }
  const auto balls = f.truncation_balls();
  return I.integrate([&](const Eigen::VectorXd& x) { return g(f(x)); }, balls);
}

Estimate expect_under(const GaussianIntegrator& I, const RandomField& f, const RandomField& p) {
  if (f.dim() != I.dim() || p.dim() != I.dim())
    throw DimensionMismatch("expect_under: field and integrator dimensions differ");
  for (const auto& x : I.probe_points()) {
    const double w = p(x);
    if (w < 0.0) {
      std::ostringstream os;
      os << "expect_under: negative weight " << w << " at a probe point";
      throw DomainError(os.str());
    }
  }
  const auto balls = collect_balls({&f, &p});
  return I.integrate(
      [&](const Eigen::VectorXd& x) {
        const double w = p(x);
        return w == 0.0 ? 0.0 : f(x) * w;
      },
      balls);
}

}  // namespace orlicz
