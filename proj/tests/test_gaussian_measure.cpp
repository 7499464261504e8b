#include <doctest.h>

#include "orlicz/estimate.hpp"
#include "orlicz/gaussian_measure.hpp"
#include "orlicz/random_field.hpp"

#include <cmath>
#include <random>

using namespace orlicz;

namespace {

Eigen::VectorXd pt(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double a : v) x(i++) = a;
  return x;
}

double double_factorial(int n) {
  double r = 1.0;
  for (int k = n; k > 1; k -= 2) r *= k;
  return r;
}

}  // namespace

TEST_CASE("field evaluation and presets") {
  const auto x = parse_field("x", 1);
  CHECK(x(pt({2.0})) == 2.0);
  CHECK(parse_field("x^3", 1)(pt({2.0})) == 8.0);
  CHECK(parse_field("H3", 1)(pt({2.0})) == doctest::Approx(2.0));
  CHECK(parse_field("H3/6", 1)(pt({2.0})) == doctest::Approx(2.0 / 6.0));
  CHECK(parse_field("H(1,1)", 2)(pt({2.0, 3.0})) == doctest::Approx(6.0));
  CHECK(parse_field("sqnorm", 2)(pt({1.0, 2.0})) == doctest::Approx(5.0));
  CHECK(parse_field("|x|^2", 1)(pt({-3.0})) == doctest::Approx(9.0));
  CHECK(parse_field("relu(x)", 1)(pt({-1.0})) == 0.0);
  CHECK(parse_field("tilt:0.5", 1)(pt({2.0})) == doctest::Approx(1.0));
  CHECK(parse_field("trunc:2:x^2", 1)(pt({3.0})) == 0.0);
  CHECK(parse_field("trunc:2:x^2", 1)(pt({1.5})) == doctest::Approx(2.25));
  CHECK(parse_field("bump:0.5:1", 1)(pt({0.5})) == doctest::Approx(1.0));
  CHECK(parse_field("bump:0.5:1", 1)(pt({2.0})) == 0.0);
  CHECK(parse_field("exp(x^2)", 1)(pt({1.0})) == doctest::Approx(std::exp(1.0)));
  CHECK(parse_field("x2", 3)(pt({1.0, 7.0, 3.0})) == 7.0);
}

TEST_CASE("field parse errors are distinct") {
  CHECK_THROWS_WITH_AS(parse_field("nonsense", 1), doctest::Contains("unknown field preset"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_field("{\"op\":", 1), doctest::Contains("malformed field JSON"), std::invalid_argument);
  CHECK_THROWS_AS(parse_field("x3", 2), DimensionMismatch);
  CHECK_THROWS_AS(parse_field("{\"dim\":2,\"expr\":{\"op\":\"coord\",\"axis\":0}}", 1), DimensionMismatch);
}

TEST_CASE("JSON round trip") {
  for (const char* spec : {"x", "H3/6", "tanh(x)", "trunc:3:x^2", "bump:0.5:1", "relu(x)", "0.5*x^2", "|x|"}) {
    CAPTURE(spec);
    const auto f = parse_field(spec, 1);
    const auto g = RandomField::from_json(f.to_json());
    for (double t : {-2.5, -0.3, 0.0, 0.7, 4.0}) CHECK(g(pt({t})) == f(pt({t})));
    CHECK(g.to_json() == f.to_json());
  }
  const auto h = parse_field("{\"op\":\"product\",\"factors\":[{\"op\":\"coord\",\"axis\":0},{\"op\":\"coord\",\"axis\":1}]}", 2);
  CHECK(h(pt({2.0, 3.0})) == 6.0);
}

TEST_CASE("symbolic gradients agree with central differences") {
  const double step = 1e-5;
  for (const char* spec : {"x^3", "H3/6", "tanh(x)", "softplus(x)", "0.5*x^2", "bump:0.2:1.5", "sigmoid(x)"}) {
    CAPTURE(spec);
    const auto f = parse_field(spec, 1);
    const auto df = f.partial(0);
    for (double t : {-1.3, -0.2, 0.4, 1.1}) {
      const double fd = (f(pt({t + step})) - f(pt({t - step}))) / (2 * step);
      CHECK(df(pt({t})) == doctest::Approx(fd).epsilon(1e-7));
    }
  }
  const auto f2 = parse_field("H(1,2)", 2);
  const auto d1 = f2.partial(1);
  const Eigen::VectorXd x = pt({0.7, -0.4});
  const Eigen::VectorXd e = pt({0.0, step});
  CHECK(d1(x) == doctest::Approx((f2(x + e) - f2(x - e)) / (2 * step)).epsilon(1e-7));
}

TEST_CASE("simplification") {
  const auto x = RandomField::coordinate(1, 0);
  CHECK((x - x).is_zero());
  CHECK((2.0 * RandomField::constant(1, 3.0)).constant_value() == 6.0);
  CHECK(RandomField::compose(Activation::Identity, x).to_json() == x.to_json());
  CHECK(parse_field("x^2", 1).as_polynomial().has_value());
  CHECK_FALSE(parse_field("tanh(x)", 1).as_polynomial().has_value());
  CHECK_THROWS_AS(parse_field("step(x)", 1).partial(0), DomainError);
}

TEST_CASE("Gaussian moments") {
  const auto I = GaussianIntegrator::standard(1);
  CHECK(expect(I, parse_field("x^2", 1)).value() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(expect(I, parse_field("x^4", 1)).value() == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(expect(I, parse_field("exp(x^2)", 1)).diverged());
  CHECK(expect(I, parse_field("|x|", 1)).value() == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-12));
}

TEST_CASE("quadrature reproduces even moments") {
  const int m = 16;
  const auto I = GaussianIntegrator::quadrature(1, m);
  for (int k = 1; k <= m - 1; ++k) {
    CAPTURE(k);
    const auto f = parse_field("x^" + std::to_string(2 * k), 1);
    CHECK(expect(I, f).value() == doctest::Approx(double_factorial(2 * k - 1)).epsilon(1e-10));
  }
}

TEST_CASE("weighted expectations") {
  const auto I = GaussianIntegrator::standard(1);
  const auto one = RandomField::constant(1, 1.0);
  CHECK(expect_under(I, one, one).value() == doctest::Approx(1.0));
  const auto tilt = parse_field("exp(0.5*x)", 1) * RandomField::constant(1, std::exp(-0.125));
  CHECK(expect_under(I, parse_field("x", 1), tilt).value() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(expect_under(I, parse_field("x^2", 1), one).value() == doctest::Approx(1.0));
  CHECK_THROWS_AS(expect_under(I, one, parse_field("x", 1)), DomainError);
}

TEST_CASE("dimension mismatch") {
  const auto I = GaussianIntegrator::standard(2);
  CHECK_THROWS_AS(expect(I, parse_field("x", 1)), DimensionMismatch);
}

TEST_CASE("two and three dimensions") {
  const auto I2 = GaussianIntegrator::standard(2);
  CHECK(expect(I2, parse_field("sqnorm", 2)).value() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(expect(I2, parse_field("H(2,2)", 2) * parse_field("H(2,2)", 2)).value() == doctest::Approx(4.0).epsilon(1e-10));
  const auto I3 = GaussianIntegrator::standard(3);
  CHECK(expect(I3, parse_field("sqnorm", 3)).value() == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(expect(I3, parse_field("exp(x^2)", 3)).diverged());
}

TEST_CASE("truncation spheres are respected") {
  const auto I = GaussianIntegrator::standard(1);
  // E[1(|x| ≤ 1)] = erf(1/√2)
  const auto f = RandomField::truncate(RandomField::constant(1, 1.0), 1.0);
  CHECK(expect(I, f).value() == doctest::Approx(std::erf(1.0 / std::sqrt(2.0))).epsilon(1e-12));
  const auto I2 = GaussianIntegrator::standard(2);
  // γ₂(|x| ≤ 1) = 1 - e^{-1/2}
  const auto g = RandomField::truncate(RandomField::constant(2, 1.0), 1.0);
  CHECK(expect(I2, g).value() == doctest::Approx(1.0 - std::exp(-0.5)).epsilon(1e-10));
}

TEST_CASE("Monte Carlo") {
  const auto I = GaussianIntegrator::monte_carlo(1);
  const Estimate e = expect(I, parse_field("x^2", 1));
  CHECK(std::abs(e.value() - 1.0) <= 5.0 * e.error_bound());
  const auto J = GaussianIntegrator::monte_carlo(1);
  CHECK(expect(J, parse_field("x^2", 1)).value() == e.value());
  const auto K = GaussianIntegrator::monte_carlo(1, 1000000, 7);
  CHECK(expect(K, parse_field("x^2", 1)).value() != e.value());
  const auto I5 = GaussianIntegrator::standard(5);
  const Estimate s = expect(I5, parse_field("sqnorm", 5));
  CHECK(std::abs(s.value() - 5.0) <= 5.0 * s.error_bound());
}

TEST_CASE("linearity") {
  const auto I = GaussianIntegrator::standard(1);
  const auto f = parse_field("tanh(x)", 1) + parse_field("x^2", 1);
  const auto g = parse_field("relu(x)", 1);
  const double lhs = expect(I, 2.5 * f + (-1.5) * g).value();
  CHECK(lhs == doctest::Approx(2.5 * expect(I, f).value() - 1.5 * expect(I, g).value()).epsilon(1e-12));
}

TEST_CASE("divergence guard on a huge but integrable field") {
  const auto I = GaussianIntegrator::standard(1);
  CHECK(expect(I, parse_field("exp(0.45*x^2)", 1)).is_finite());
  CHECK(expect(I, parse_field("exp(0.5*x^2)", 1)).diverged());
}
