#include "orlicz/young.hpp"

#include "orlicz/detail/gauss_kronrod.hpp"
#include "orlicz/estimate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace orlicz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kInversionRelTol = 1e-12;
constexpr int kInversionMaxIter = 200;

// Solve phi(x) = y for x ≥ 0 with phi continuous and strictly increasing.
template <typename F>
double invert_monotone(F&& phi, double y) {
  if (y <= 0.0) return 0.0;
  if (std::isinf(y)) return kInf;
  double lo = 0.0;
  double hi = 1.0;
  int guard = 0;
  while (phi(hi) < y) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 2000) throw DomainError("derivative inversion: φ does not reach the target value");
  }
  for (int it = 0; it < kInversionMaxIter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (phi(mid) < y)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= kInversionRelTol * hi) break;
  }
  return 0.5 * (lo + hi);
}

// ∫₀^y g(v) dv for a smooth nonnegative increasing g.
template <typename F>
double primitive(F&& g, double y) {
  if (y <= 0.0) return 0.0;
  std::vector<double> knots{0.0};
  // Geometric knots so large arguments still resolve the region near 0.
  for (double t = std::min(y, 1.0) / 16.0; t < y; t *= 4.0) knots.push_back(t);
  knots.push_back(y);
  auto r = detail::adaptive_integrate(g, knots, 0.0, 1e-13, 4000);
  return r.value;
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(15);
  os << v;
  return os.str();
}

}  // namespace

class YoungFunction::Impl : public std::enable_shared_from_this<YoungFunction::Impl> {
 public:
  virtual ~Impl() = default;
  virtual Kind kind() const = 0;
  virtual std::string name() const = 0;
  virtual double value(double x) const = 0;  // x ≥ 0
  virtual double log_value(double x) const { return std::log(value(x)); }
  virtual double derivative(double x) const = 0;
  virtual double derivative_inverse(double y) const {
    return invert_monotone([this](double x) { return derivative(x); }, y);
  }
  virtual std::shared_ptr<const Impl> conjugate() const;
  virtual double exponent() const { return 0.0; }
};

namespace {

class PowerImpl final : public YoungFunction::Impl {
 public:
  explicit PowerImpl(double alpha) : alpha_(alpha) {
    if (!(alpha > 1.0)) throw DomainError("power Young function needs alpha > 1");
  }
  YoungFunction::Kind kind() const override { return YoungFunction::Kind::Power; }
  std::string name() const override { return "power:" + format_number(alpha_); }
  double value(double x) const override { return young_closed_form::power(x, alpha_); }
  double log_value(double x) const override { return alpha_ * std::log(x) - std::log(alpha_); }
  double derivative(double x) const override { return std::pow(x, alpha_ - 1.0); }
  double derivative_inverse(double y) const override { return std::pow(y, 1.0 / (alpha_ - 1.0)); }
  std::shared_ptr<const YoungFunction::Impl> conjugate() const override {
    return std::make_shared<PowerImpl>(alpha_ / (alpha_ - 1.0));
  }
  double exponent() const override { return alpha_; }

 private:
  double alpha_;
};

class Exp2ConjImpl;
class Cosh2ConjImpl;

class Exp2Impl final : public YoungFunction::Impl {
 public:
  YoungFunction::Kind kind() const override { return YoungFunction::Kind::Exp2; }
  std::string name() const override { return "exp2"; }
  double value(double x) const override { return young_closed_form::exp2(x); }
  double log_value(double x) const override {
    if (x < 1.0) return std::log(value(x));
    return x + std::log1p(-(1.0 + x) * std::exp(-x));
  }
  double derivative(double x) const override { return std::expm1(x); }
  double derivative_inverse(double y) const override { return std::log1p(y); }
  std::shared_ptr<const YoungFunction::Impl> conjugate() const override;
};

class Exp2ConjImpl final : public YoungFunction::Impl {
 public:
  YoungFunction::Kind kind() const override { return YoungFunction::Kind::Exp2Conj; }
  std::string name() const override { return "exp2*"; }
  double value(double y) const override { return young_closed_form::exp2_conjugate(y); }
  double derivative(double y) const override { return std::log1p(y); }
  double derivative_inverse(double x) const override { return std::expm1(x); }
  std::shared_ptr<const YoungFunction::Impl> conjugate() const override { return std::make_shared<Exp2Impl>(); }
};

std::shared_ptr<const YoungFunction::Impl> Exp2Impl::conjugate() const { return std::make_shared<Exp2ConjImpl>(); }

class Cosh2Impl final : public YoungFunction::Impl {
 public:
  YoungFunction::Kind kind() const override { return YoungFunction::Kind::Cosh2; }
  std::string name() const override { return "cosh2"; }
  double value(double x) const override { return young_closed_form::cosh2(x); }
  double log_value(double x) const override {
    if (x < 20.0) return std::log(value(x));
    const double e = std::exp(-x);
    return x - std::log(2.0) + std::log1p(-2.0 * e + e * e);
  }
  double derivative(double x) const override { return std::sinh(x); }
  double derivative_inverse(double y) const override { return std::asinh(y); }
  std::shared_ptr<const YoungFunction::Impl> conjugate() const override;
};

class Cosh2ConjImpl final : public YoungFunction::Impl {
 public:
  YoungFunction::Kind kind() const override { return YoungFunction::Kind::Cosh2Conj; }
  std::string name() const override { return "cosh2*"; }
  double value(double y) const override { return young_closed_form::cosh2_conjugate(y); }
  double derivative(double y) const override { return std::asinh(y); }
  double derivative_inverse(double x) const override { return std::sinh(x); }
  std::shared_ptr<const YoungFunction::Impl> conjugate() const override { return std::make_shared<Cosh2Impl>(); }
};

std::shared_ptr<const YoungFunction::Impl> Cosh2Impl::conjugate() const { return std::make_shared<Cosh2ConjImpl>(); }

class Gauss2Impl final : public YoungFunction::Impl {
 public:
  YoungFunction::Kind kind() const override { return YoungFunction::Kind::Gauss2; }
  std::string name() const override { return "gauss2"; }
  double value(double x) const override { return young_closed_form::gauss2(x); }
  double log_value(double x) const override {
    const double h = 0.5 * x * x;
    if (h < 1.0) return std::log(std::expm1(h));
    return h + std::log1p(-std::exp(-h));
  }
  double derivative(double x) const override { return x * std::exp(0.5 * x * x); }
};

class SquaredImpl final : public YoungFunction::Impl {
 public:
  explicit SquaredImpl(std::shared_ptr<const YoungFunction::Impl> base) : base_(std::move(base)) {}
  YoungFunction::Kind kind() const override { return YoungFunction::Kind::Squared; }
  std::string name() const override { return "sq:" + base_->name(); }
  double value(double x) const override { return base_->value(x * x); }
  double log_value(double x) const override { return base_->log_value(x * x); }
  double derivative(double x) const override { return 2.0 * x * base_->derivative(x * x); }

 private:
  std::shared_ptr<const YoungFunction::Impl> base_;
};

// ψ = φ_base⁻¹ by bisection, Ψ by adaptive quadrature of ψ.
class NumericConjugateImpl final : public YoungFunction::Impl {
 public:
  explicit NumericConjugateImpl(std::shared_ptr<const YoungFunction::Impl> base) : base_(std::move(base)) {}
  YoungFunction::Kind kind() const override { return YoungFunction::Kind::Custom; }
  std::string name() const override { return "conj:" + base_->name(); }
  double value(double y) const override {
    return primitive([this](double v) { return base_->derivative_inverse(v); }, y);
  }
  double derivative(double y) const override { return base_->derivative_inverse(y); }
  double derivative_inverse(double x) const override { return base_->derivative(x); }
  // Conjugation is an involution.
  std::shared_ptr<const YoungFunction::Impl> conjugate() const override { return base_; }

 private:
  std::shared_ptr<const YoungFunction::Impl> base_;
};

// Fritsch-Carlson monotone cubic Hermite interpolant of φ, linear past the grid.
class CustomImpl final : public YoungFunction::Impl {
 public:
  CustomImpl(std::vector<double> grid, std::vector<double> values) : x_(std::move(grid)), y_(std::move(values)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw std::invalid_argument("custom Young function: need ≥ 2 matching samples");
    if (x_[0] != 0.0 || y_[0] != 0.0) throw DomainError("custom Young function: φ(0) must be 0 at grid start 0");
    for (std::size_t i = 1; i < n; ++i)
      if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("custom Young function: grid must be increasing");
    for (std::size_t i = 1; i < n; ++i)
      if (!(y_[i] > y_[i - 1])) throw DomainError("custom Young function: φ must be strictly increasing");

    std::vector<double> delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
    slope_.assign(n, 0.0);
    slope_[0] = delta[0];
    slope_[n - 1] = delta[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (delta[i - 1] * delta[i] <= 0.0) {
        slope_[i] = 0.0;
      } else {
        const double h0 = x_[i] - x_[i - 1];
        const double h1 = x_[i + 1] - x_[i];
        const double w1 = 2.0 * h1 + h0;
        const double w2 = h1 + 2.0 * h0;
        slope_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
      }
    }
    cumulative_.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i)
      cumulative_[i + 1] = cumulative_[i] + segment_integral(i, x_[i + 1]);
  }

  YoungFunction::Kind kind() const override { return YoungFunction::Kind::Custom; }
  std::string name() const override { return "custom"; }

  double derivative(double x) const override {
    if (x <= 0.0) return 0.0;
    if (x >= x_.back()) return y_.back() + slope_.back() * (x - x_.back());
    const std::size_t i = segment(x);
    return hermite(i, x);
  }

  double value(double x) const override {
    if (x <= 0.0) return 0.0;
    if (x >= x_.back()) {
      const double d = x - x_.back();
      return cumulative_.back() + y_.back() * d + 0.5 * slope_.back() * d * d;
    }
    const std::size_t i = segment(x);
    return cumulative_[i] + segment_integral(i, x);
  }

 private:
  std::size_t segment(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    return static_cast<std::size_t>(std::distance(x_.begin(), it)) - 1;
  }

  double hermite(std::size_t i, double x) const {
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * slope_[i] + (-2 * t3 + 3 * t2) * y_[i + 1] +
           (t3 - t2) * h * slope_[i + 1];
  }

  // Simpson is exact for the cubic piece.
  double segment_integral(std::size_t i, double x) const {
    const double a = x_[i];
    return (x - a) / 6.0 * (hermite(i, a) + 4.0 * hermite(i, 0.5 * (a + x)) + hermite(i, x));
  }

  std::vector<double> x_, y_, slope_, cumulative_;
};

std::shared_ptr<const YoungFunction::Impl> parse_impl(std::string_view name) {
  if (name == "exp2") return std::make_shared<Exp2Impl>();
  if (name == "exp2*") return std::make_shared<Exp2ConjImpl>();
  if (name == "cosh2") return std::make_shared<Cosh2Impl>();
  if (name == "cosh2*") return std::make_shared<Cosh2ConjImpl>();
  if (name == "gauss2") return std::make_shared<Gauss2Impl>();
  if (name.starts_with("power:")) {
    const std::string text(name.substr(6));
    std::size_t used = 0;
    double alpha = 0.0;
    try {
      alpha = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size()) throw std::invalid_argument("bad power exponent in '" + std::string(name) + "'");
    return std::make_shared<PowerImpl>(alpha);
  }
  if (name.starts_with("sq:")) return std::make_shared<SquaredImpl>(parse_impl(name.substr(3)));
  if (name.starts_with("conj:")) return parse_impl(name.substr(5))->conjugate();
  throw std::invalid_argument("unknown Young function '" + std::string(name) + "'");
}

}  // namespace

std::shared_ptr<const YoungFunction::Impl> YoungFunction::Impl::conjugate() const {
  return std::make_shared<NumericConjugateImpl>(shared_from_this());
}

YoungFunction YoungFunction::power(double alpha) { return YoungFunction(std::make_shared<PowerImpl>(alpha)); }
YoungFunction YoungFunction::exp2() { return YoungFunction(std::make_shared<Exp2Impl>()); }
YoungFunction YoungFunction::exp2_conjugate() { return YoungFunction(std::make_shared<Exp2ConjImpl>()); }
YoungFunction YoungFunction::cosh2() { return YoungFunction(std::make_shared<Cosh2Impl>()); }
YoungFunction YoungFunction::cosh2_conjugate() { return YoungFunction(std::make_shared<Cosh2ConjImpl>()); }
YoungFunction YoungFunction::gauss2() { return YoungFunction(std::make_shared<Gauss2Impl>()); }
YoungFunction YoungFunction::squared(const YoungFunction& base) {
  return YoungFunction(std::make_shared<SquaredImpl>(base.impl_));
}
YoungFunction YoungFunction::from_derivative(std::vector<double> grid, std::vector<double> phi_values) {
  return YoungFunction(std::make_shared<CustomImpl>(std::move(grid), std::move(phi_values)));
}
YoungFunction YoungFunction::parse(std::string_view name) { return YoungFunction(parse_impl(name)); }

YoungFunction::Kind YoungFunction::kind() const { return impl_->kind(); }
std::string YoungFunction::name() const { return impl_->name(); }
double YoungFunction::exponent() const { return impl_->exponent(); }

double YoungFunction::operator()(double x) const { return impl_->value(std::abs(x)); }

double YoungFunction::log_value(double x) const {
  x = std::abs(x);
  if (x == 0.0) return -kInf;
  return impl_->log_value(x);
}

double YoungFunction::derivative(double x) const { return impl_->derivative(std::abs(x)); }
double YoungFunction::derivative_inverse(double y) const { return impl_->derivative_inverse(std::abs(y)); }

YoungFunction YoungFunction::conjugate() const {
  validate();
  return YoungFunction(impl_->conjugate());
}

void YoungFunction::validate() const {
  if (impl_->derivative(0.0) != 0.0) throw DomainError(name() + ": φ(0) != 0");
  double prev = 0.0;
  for (double x = 1e-6; x <= 1e6; x *= 1.25) {
    const double v = impl_->derivative(x);
    if (std::isinf(v)) break;
    if (!(v > prev)) throw DomainError(name() + ": φ is not strictly increasing on the probe grid");
    prev = v;
  }
}

YoungLegendreReport check_young_legendre(const YoungFunction& phi, double x, double y) {
  if (x < 0.0 || y < 0.0) throw std::invalid_argument("check_young_legendre: x, y must be ≥ 0");
  const YoungFunction psi = phi.conjugate();
  const double dphi = phi.derivative(x);
  YoungLegendreReport r;
  r.young_gap = phi(x) + psi(y) - x * y;
  r.legendre_residual = phi(x) + psi(dphi) - x * dphi;
  return r;
}

DominationCertificate eventually_dominates(const YoungFunction& smaller, const YoungFunction& larger,
                                           std::span<const double> k_grid, std::span<const double> x_thresholds,
                                           double probe_hi, int probes_per_decade) {
  std::vector<double> ks(k_grid.begin(), k_grid.end());
  std::vector<double> xs(x_thresholds.begin(), x_thresholds.end());
  std::sort(ks.begin(), ks.end());
  std::sort(xs.begin(), xs.end());
  const double ratio = std::pow(10.0, 1.0 / probes_per_decade);
  constexpr double kFloor = 1e-6;
  constexpr double kSlack = 1e-12;

  for (double k : ks) {
    for (double xbar : xs) {
      const double lo = std::max(xbar, kFloor);
      bool ok = true;
      int count = 0;
      for (double x = lo; x <= probe_hi * (1 + 1e-12); x *= ratio) {
        ++count;
        const double a = smaller.log_value(x);
        const double b = larger.log_value(k * x);
        if (!(a <= b + kSlack * std::max(1.0, std::abs(b)))) {
          ok = false;
          break;
        }
      }
      if (ok) return DominationCertificate{true, k, xbar, lo, probe_hi, count};
    }
  }
  return DominationCertificate{false, 0.0, 0.0, kFloor, probe_hi, 0};
}

std::vector<double> default_domination_k_grid() { return {1.0, 1.5, 2.0, 3.0, 4.0, 8.0, 16.0}; }
std::vector<double> default_domination_thresholds() { return {0.0, 1.0, 2.0, 5.0, 10.0, 100.0, 1000.0}; }

}  // namespace orlicz
