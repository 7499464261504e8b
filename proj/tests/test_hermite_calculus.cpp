#include <doctest.h>

#include "orlicz/estimate.hpp"
#include "orlicz/hermite_calculus.hpp"

#include <cmath>

using namespace orlicz;

namespace {

const GaussianIntegrator& I1() {
  static const GaussianIntegrator I = GaussianIntegrator::standard(1);
  return I;
}

Polynomial mono(std::initializer_list<std::pair<int, double>> terms) {
  Polynomial::Coefficients c;
  for (auto [k, v] : terms) c[{k}] = v;
  return Polynomial(1, c);
}

}  // namespace

TEST_CASE("Hermite basis by iterated divergence") {
  CHECK(hermite_polynomial({1}).distance(mono({{1, 1.0}})) == 0.0);
  CHECK(hermite_polynomial({2}).distance(mono({{2, 1.0}, {0, -1.0}})) == 0.0);
  CHECK(hermite_polynomial({3}).distance(mono({{3, 1.0}, {1, -3.0}})) == 0.0);
  CHECK(hermite({4}).to_polynomial().distance(hermite_polynomial({4})) < 1e-12);
}

TEST_CASE("recurrence agrees with evaluation") {
  for (double t : {-2.0, -0.5, 0.3, 1.7}) {
    const Eigen::VectorXd h = hermite_values(t, 8);
    for (int k = 0; k <= 8; ++k) {
      CAPTURE(k);
      CHECK(hermite_polynomial({k})(Eigen::VectorXd::Constant(1, t)) == doctest::Approx(h(k)).epsilon(1e-12));
    }
    for (int k = 1; k < 8; ++k) CHECK(h(k + 1) == doctest::Approx(t * h(k) - k * h(k - 1)));
  }
}

TEST_CASE("orthogonality up to degree 6") {
  const auto I = GaussianIntegrator::quadrature(1, 16);
  for (int a = 0; a <= 6; ++a)
    for (int b = 0; b <= 6; ++b) {
      const double v =
          expect(I, RandomField::hermite(HermiteSeries::basis({a})) * RandomField::hermite(HermiteSeries::basis({b})))
              .value();
      CHECK(v == doctest::Approx(a == b ? std::tgamma(a + 1.0) : 0.0).epsilon(1e-12).scale(1.0));
    }
  const auto I2 = GaussianIntegrator::quadrature(2, 12);
  const auto h11 = RandomField::hermite(HermiteSeries::basis({1, 1}));
  const auto h21 = RandomField::hermite(HermiteSeries::basis({2, 1}));
  CHECK(expect(I2, h21 * h21).value() == doctest::Approx(2.0));
  CHECK(std::abs(expect(I2, h11 * h21).value()) < 1e-12);
}

TEST_CASE("partial derivatives in coefficient space") {
  CHECK(partial(0, hermite({3})).distance(3.0 * hermite({2})) == 0.0);
  CHECK(partial(0, HermiteSeries::basis({0})).coefficients().empty());
  CHECK(partial(0, hermite({1, 1})).distance(hermite({0, 1})) == 0.0);
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b <= 3; ++b) {
      const MultiIndex alpha = {a, b};
      for (int i = 0; i < 2; ++i) {
        MultiIndex lower = alpha;
        if (lower[i] == 0) {
          CHECK(partial(i, hermite(alpha)).coefficients().empty());
          continue;
        }
        --lower[i];
        CHECK(partial(i, hermite(alpha)).distance(static_cast<double>(alpha[i]) * hermite(lower)) == 0.0);
      }
    }
}

TEST_CASE("divergence operator") {
  const Eigen::VectorXd t = Eigen::VectorXd::Constant(1, 1.3);
  CHECK(divergence(0, RandomField::constant(1, 1.0))(t) == doctest::Approx(1.3));
  CHECK(divergence(0, parse_field("x", 1))(t) == doctest::Approx(1.3 * 1.3 - 1.0));
  CHECK(divergence_of_gradient(parse_field("x^2", 1))(t) == doctest::Approx(2 * 1.3 * 1.3 - 2.0));
  CHECK_THROWS_AS(divergence(0, parse_field("step(x)", 1)), DomainError);
}

TEST_CASE("integration by parts examples") {
  const IbpReport a = ibp_check(parse_field("x", 1), parse_field("x^2", 1), 0, I1());
  CHECK(a.lhs.value() == doctest::Approx(2.0));
  CHECK(a.rhs.value() == doctest::Approx(2.0));
  CHECK(a.residual < 1e-10);
  const IbpReport b = ibp_check(RandomField::constant(1, 1.0), RandomField::constant(1, 1.0), 0, I1());
  CHECK(b.lhs.value() == 0.0);
  CHECK(std::abs(b.rhs.value()) < 1e-14);
  const IbpReport c = ibp_check(parse_field("H2", 1), parse_field("H3", 1), 0, I1());
  CHECK(c.lhs.value() == doctest::Approx(6.0));
  CHECK(c.rhs.value() == doctest::Approx(6.0));
}

TEST_CASE("integration by parts on Hermite pairs up to degree 5") {
  for (int a = 0; a <= 5; ++a)
    for (int b = 0; b <= 5; ++b) {
      CAPTURE(a);
      CAPTURE(b);
      const auto f = RandomField::hermite(HermiteSeries::basis({a}));
      const auto g = RandomField::hermite(HermiteSeries::basis({b}));
      CHECK(ibp_check(f, g, 0, I1()).residual < 1e-8);
    }
  const auto I2 = GaussianIntegrator::standard(2);
  CHECK(ibp_check(parse_field("H(1,2)", 2), parse_field("H(2,2)", 2), 1, I2).residual < 1e-8);
  CHECK(ibp_check(parse_field("tanh(x)", 1), parse_field("x^3", 1), 0, I1()).residual < 1e-8);
}

TEST_CASE("expansions") {
  const Expansion e = expand(parse_field("x^2", 1), 4, I1());
  CHECK(e.series.coefficient({0}) == doctest::Approx(1.0));
  CHECK(e.series.coefficient({2}) == doctest::Approx(1.0));
  CHECK(std::abs(e.series.coefficient({1})) < 1e-14);
  CHECK(std::abs(e.series.coefficient({4})) < 1e-14);
  CHECK(std::abs(e.error_by_degree.back()) < 1e-8);

  const Expansion h = expand(parse_field("H3", 1), 3, I1());
  CHECK(h.series.distance(hermite({3})) < 1e-12);
  CHECK(h.reconstruction_error < 1e-12);

  const Expansion a = expand(parse_field("|x|", 1), 6, I1());
  for (std::size_t d = 1; d < a.error_by_degree.size(); ++d) CHECK(a.error_by_degree[d] <= a.error_by_degree[d - 1] + 1e-14);
  // E[|x| He_2] = 2 √(2/π) - √(2/π) = √(2/π), so c₂ = √(2/π) / 2
  CHECK(a.series.coefficient({2}) == doctest::Approx(std::sqrt(2.0 / M_PI) / 2.0).epsilon(1e-10));
  // E[|x| He_4] = (8 - 12 + 3) √(2/π), c₄ = -√(2/π) / 24
  CHECK(a.series.coefficient({4}) == doctest::Approx(-std::sqrt(2.0 / M_PI) / 24.0).epsilon(1e-10));
  CHECK(a.reconstruction_error == doctest::Approx(a.error_by_degree.back()).epsilon(1e-6));
}

TEST_CASE("Parseval") {
  for (const char* spec : {"x^3", "H(1,1)", "tanh(x1)"}) {
    CAPTURE(spec);
    const int n = std::string(spec).find("x1") != std::string::npos || spec[1] == '(' ? 2 : 1;
    const auto I = GaussianIntegrator::standard(n);
    const Expansion e = expand(parse_field(spec, n), 5, I);
    for (double err : e.error_by_degree) CHECK(err >= -1e-10);
  }
  const Expansion p = expand(parse_field("x^3", 1), 5, I1());
  CHECK(std::abs(p.error_by_degree.back()) < 1e-8);
}
