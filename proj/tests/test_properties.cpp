#include <doctest.h>

#include "orlicz/orlicz_norms.hpp"
#include "orlicz/orlicz_sobolev.hpp"
#include "orlicz/young.hpp"

#include <cmath>
#include <random>
#include <string>

using namespace orlicz;

namespace {

const GaussianIntegrator& I1() {
  static const GaussianIntegrator I = GaussianIntegrator::quadrature(1, 64);
  return I;
}

RandomField random_polynomial(std::mt19937& rng, int degree) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  RandomField f = RandomField::constant(1, coef(rng));
  for (int k = 1; k <= degree; ++k) f = f + coef(rng) * parse_field("x^" + std::to_string(k), 1);
  return f;
}

double lux(const RandomField& f, const YoungFunction& phi) { return luxemburg_norm(f, phi, I1()).value; }

}  // namespace

TEST_CASE("absolute homogeneity of the three norms") {
  const auto f = parse_field("H2/2", 1) + parse_field("tanh(x)", 1);
  const auto phi = YoungFunction::cosh2();
  const double l = lux(f, phi);
  const double d = dual_norm(f, phi, I1()).value;
  const double m = moment_norm(f, I1()).value;
  for (double c : {0.5, 2.0, -3.0}) {
    CAPTURE(c);
    const auto g = c * f;
    CHECK(lux(g, phi) == doctest::Approx(std::abs(c) * l).epsilon(1e-9));
    CHECK(dual_norm(g, phi, I1()).value == doctest::Approx(std::abs(c) * d).epsilon(1e-8));
    CHECK(moment_norm(g, I1()).value == doctest::Approx(std::abs(c) * m).epsilon(1e-12));
  }
}

TEST_CASE("triangle inequality on random polynomials") {
  std::mt19937 rng(7);
  for (const char* name : {"cosh2", "power:2", "exp2"}) {
    const auto phi = YoungFunction::parse(name);
    for (int trial = 0; trial < 6; ++trial) {
      CAPTURE(name);
      CAPTURE(trial);
      const auto f = random_polynomial(rng, 2);
      const auto g = random_polynomial(rng, 2);
      CHECK(lux(f + g, phi) <= (lux(f, phi) + lux(g, phi)) * (1 + 1e-9));
    }
  }
}

TEST_CASE("squared Young function and squares") {
  // ‖f²‖_Φ = ‖f‖²_{Φ(x²)}
  const auto phi = YoungFunction::cosh2();
  const auto sq = YoungFunction::squared(phi);
  for (const auto& f : {parse_field("x", 1), parse_field("tanh(x)", 1), parse_field("0.3*x", 1) + 0.2}) {
    CHECK(lux(f * f, phi) == doctest::Approx(std::pow(lux(f, sq), 2)).epsilon(1e-9));
  }
  // ‖fg‖_Φ ≤ ‖f‖_{Φ(x²)} ‖g‖_{Φ(x²)}
  std::mt19937 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const auto f = random_polynomial(rng, 1);
    const auto g = random_polynomial(rng, 1);
    CHECK(lux(f * g, phi) <= lux(f, sq) * lux(g, sq) * (1 + 1e-9));
  }
}

TEST_CASE("Young inequality and Legendre equality on a grid") {
  for (const char* name : {"power:1.5", "power:2", "power:3", "exp2", "cosh2"}) {
    const auto phi = YoungFunction::parse(name);
    for (double x = 0.0; x <= 3.0; x += 0.25)
      for (double y = 0.0; y <= 3.0; y += 0.25) {
        CAPTURE(name);
        CAPTURE(x);
        CAPTURE(y);
        const auto r = check_young_legendre(phi, x, y);
        CHECK(r.young_gap >= -1e-12);
        CHECK(std::abs(r.legendre_residual) < 1e-8);
      }
  }
}

TEST_CASE("double conjugation") {
  for (const char* name : {"power:1.5", "power:3", "exp2", "cosh2"}) {
    CAPTURE(name);
    const auto phi = YoungFunction::parse(name);
    const auto back = phi.conjugate().conjugate();
    for (double x : {0.1, 0.7, 1.5, 2.5}) CHECK(back(x) == doctest::Approx(phi(x)).epsilon(1e-8));
  }
}

TEST_CASE("domination is transitive and reverses under conjugation") {
  const auto ks = default_domination_k_grid();
  const auto xs = default_domination_thresholds();
  const auto a = YoungFunction::power(2);
  const auto b = YoungFunction::cosh2();
  const auto c = YoungFunction::gauss2();
  REQUIRE(eventually_dominates(a, b, ks, xs).holds);
  REQUIRE(eventually_dominates(b, c, ks, xs).holds);
  CHECK(eventually_dominates(a, c, ks, xs).holds);
  CHECK(eventually_dominates(b.conjugate(), a.conjugate(), ks, xs).holds);
  CHECK(eventually_dominates(YoungFunction::power(3).conjugate(), YoungFunction::power(1.5).conjugate(), ks, xs).holds);
}

TEST_CASE("Sobolev total is a norm") {
  std::mt19937 rng(3);
  const auto I = GaussianIntegrator::standard(1);
  for (int trial = 0; trial < 3; ++trial) {
    const auto f = random_polynomial(rng, 2);
    const auto g = random_polynomial(rng, 2);
    const double nf = sobolev_membership(f, I).total;
    const double ng = sobolev_membership(g, I).total;
    CHECK(sobolev_membership(f + g, I).total <= (nf + ng) * (1 + 1e-9));
    CHECK(sobolev_membership(-2.0 * f, I).total == doctest::Approx(2.0 * nf).epsilon(1e-9));
  }
  CHECK(sobolev_membership(RandomField::constant(1, 0.0), I).total == 0.0);
}
