#pragma once

#include "orlicz/estimate.hpp"
#include "orlicz/quadrature_rules.hpp"
#include "orlicz/random_field.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace orlicz {

/// Tensor Gauss-Hermite rule with `order` nodes per axis.
struct GaussHermiteBackend {
  int order = 64;
};

/// Nested globally adaptive Gauss-Kronrod (G7/K15) per axis on [-L, L],
/// with truncation spheres as breakpoints.
struct AdaptiveBackend {
  double rel_tol = 1e-12;
  double half_width = 37.0;
  int max_segments = 2000;
};

/// Plain Monte Carlo; the same sample set is reused for every integral.
struct MonteCarloBackend {
  std::size_t samples = 1000000;
  std::uint64_t seed = 20240917;
};

using Backend = std::variant<GaussHermiteBackend, AdaptiveBackend, MonteCarloBackend>;

using Integrand = std::function<double(const Eigen::VectorXd&)>;

/// Expectations under the standard Gaussian measure γ on ℝⁿ.
///
/// Every backend first runs a tail probe along fixed and seeded random
/// directions: when log|h(r d)| - r²/2 + (n-1) log r stops decreasing
/// between r = 24 and r = 32 the integral is reported as diverged.
class GaussianIntegrator {
 public:
  GaussianIntegrator(int dim, Backend backend, double divergence_guard = 1e250);

  /// Adaptive for n ≤ 2, Gauss-Hermite(64) for n = 3, Monte Carlo(10⁶) above.
  static GaussianIntegrator standard(int dim);
  static GaussianIntegrator quadrature(int dim, int order = 64);
  static GaussianIntegrator adaptive(int dim, double rel_tol = 1e-12);
  static GaussianIntegrator monte_carlo(int dim, std::size_t samples = 1000000, std::uint64_t seed = 20240917);

  int dim() const { return dim_; }
  const Backend& backend() const { return backend_; }
  double divergence_guard() const { return guard_; }
  std::string description() const;

  /// ∫ h dγ. `balls` are surfaces across which h may jump.
  Estimate integrate(const Integrand& h, std::span<const Ball> balls = {}) const;

  /// The sample points used by the backend: tensor nodes for Gauss-Hermite,
  /// the cached samples for Monte Carlo, and a 33ⁿ grid otherwise.
  /// Used to check pointwise preconditions.
  std::vector<Eigen::VectorXd> probe_points() const;

  /// Whether h grows too fast along some direction to be γ-integrable.
  /// Returns the reason when it does.
  std::optional<std::string> tail_divergence(const Integrand& h) const;

 private:
  Estimate integrate_gauss_hermite(const Integrand& h) const;
  Estimate integrate_adaptive(const Integrand& h, std::span<const Ball> balls, const AdaptiveBackend& b) const;
  Estimate integrate_monte_carlo(const Integrand& h) const;

  int dim_;
  Backend backend_;
  double guard_;
  std::shared_ptr<const std::vector<QuadratureRule<double>>> rules_;  // order m and m/2
  std::shared_ptr<const Eigen::MatrixXd> samples_;                      // dim × N
  std::shared_ptr<const std::vector<Eigen::VectorXd>> directions_;
};

/// E_γ[f]
Estimate expect(const GaussianIntegrator& I, const RandomField& f);

/// E_γ[g(f)] for a scalar map g, with f's truncation spheres as breakpoints.
Estimate expect_transform(const GaussianIntegrator& I, const RandomField& f, const std::function<double(double)>& g);

/// ∫ f p dγ; throws DomainError if p < 0 at a probe point.
Estimate expect_under(const GaussianIntegrator& I, const RandomField& f, const RandomField& p);

/// Concatenated truncation spheres of several fields.
std::vector<Ball> collect_balls(std::initializer_list<const RandomField*> fields);

}  // namespace orlicz
