#pragma once

#include "orlicz/hermite_series.hpp"
#include "orlicz/polynomial.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace orlicz {

/// Scalar maps G used in compositions G∘f.
enum class Activation {
  Identity,
  Relu,        // t⁺
  Abs,         // |t|
  Tanh,
  Softplus,    // log(1 + eᵗ)
  Sigmoid,     // 1 / (1 + e⁻ᵗ)
  Exp,
  Log,
  Sqrt,
  Reciprocal,  // 1/t
  Step,        // 1(t > 0)
  Sign,
};

double apply(Activation g, double t);
std::string_view activation_name(Activation g);
Activation parse_activation(std::string_view name);
/// sup |G'| when finite (the Lipschitz constant), nullopt otherwise.
std::optional<double> activation_slope_bound(Activation g);
/// Whether G has a weak derivative that is a function (Step and Sign do not).
bool activation_weakly_differentiable(Activation g);

/// Closed ball {x : |x - center| ≤ radius}; used as integration breakpoints.
struct Ball {
  Eigen::VectorXd center;
  double radius;
};

/// A random variable on (ℝⁿ, γ) given by an immutable expression tree.
/// Gradients are exact and symbolic. Truncation f·1(|x| ≤ N) differentiates
/// to ∇f·1(|x| ≤ N): the surface term is dropped, which is the weak gradient
/// whenever f vanishes on the sphere (the bump test functions).
class RandomField {
 public:
  struct Node;

  static RandomField coordinate(int dim, int axis);
  static RandomField constant(int dim, double value);
  static RandomField hermite(HermiteSeries series);
  static RandomField polynomial(Polynomial poly);
  static RandomField squared_norm(int dim);
  static RandomField affine(std::vector<std::pair<double, RandomField>> terms, double offset = 0.0);
  static RandomField product(const RandomField& lhs, const RandomField& rhs);
  static RandomField compose(Activation g, const RandomField& inner);
  /// f·1(|x| ≤ radius)
  static RandomField truncate(const RandomField& inner, double radius);
  /// τ_h f(x) = f(x - h)
  static RandomField translate(const RandomField& inner, const Eigen::VectorXd& shift);

  int dim() const;
  double operator()(const Eigen::VectorXd& x) const;

  /// Structurally the constant c (after simplification)?
  std::optional<double> constant_value() const;
  bool is_zero() const;
  /// Structurally a polynomial (monomials, Hermite series, |x|², affine/product
  /// of those, translations)? Returns the monomial form.
  std::optional<Polynomial> as_polynomial() const;

  bool differentiable() const;
  /// ∂ᵢf; throws DomainError when the tree has no weak gradient.
  RandomField partial(int axis) const;
  std::vector<RandomField> gradient() const;
  /// Σᵢ ∂ᵢ∂ᵢ f
  RandomField laplacian() const;

  std::vector<Ball> truncation_balls() const;

  nlohmann::json to_json() const;
  static RandomField from_json(const nlohmann::json& j);

  friend RandomField operator+(const RandomField& a, const RandomField& b);
  friend RandomField operator-(const RandomField& a, const RandomField& b);
  friend RandomField operator-(const RandomField& a);
  friend RandomField operator*(const RandomField& a, const RandomField& b);
  friend RandomField operator*(double s, const RandomField& f);
  friend RandomField operator+(const RandomField& f, double c);
  friend RandomField operator-(const RandomField& f, double c);

  explicit RandomField(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  const std::shared_ptr<const Node>& node() const { return node_; }

 private:
  std::shared_ptr<const Node> node_;
};

/// min(f, g) = (f + g - |f - g|) / 2
RandomField field_min(const RandomField& f, const RandomField& g);
/// max(f, g) = (f + g + |f - g|) / 2
RandomField field_max(const RandomField& f, const RandomField& g);

/// Radial C² bump (1 - |x - c|²/s²)³ on the ball B(c, s), zero outside.
RandomField bump(const Eigen::VectorXd& center, double scale);

/// Parse a field from the CLI: a JSON expression (leading '{') or a preset
/// name. Presets: numbers (constants), "x", "x1".."x9", "x^k", "|x|",
/// "|x|^2", "sqnorm", "Hk" and "Hk/c" (Hermite), "exp(x^2)", "tanh(x)",
/// "relu(x)", "softplus(x)", "tilt:a" (a·x), "trunc:N:<preset>",
/// "bump:c:s".
RandomField parse_field(std::string_view spec, int dim);

/// Preset names understood by parse_field, for help text.
std::vector<std::string> field_preset_names();

}  // namespace orlicz
