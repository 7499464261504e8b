#include <doctest.h>

#include "orlicz/estimate.hpp"
#include "orlicz/orlicz_norms.hpp"

#include <cmath>
#include <vector>

using namespace orlicz;

namespace {

const GaussianIntegrator& I1() {
  static const GaussianIntegrator I = GaussianIntegrator::standard(1);
  return I;
}

// Root of ½((1-2/ρ)^{-1/2} + (1+2/ρ)^{-1/2}) - 1 = 1, by bisection on (2, 10).
double x_squared_cosh2_norm() {
  auto g = [](double r) { return 0.5 * (1.0 / std::sqrt(1.0 - 2.0 / r) + 1.0 / std::sqrt(1.0 + 2.0 / r)) - 2.0; };
  double lo = 2.0 + 1e-12, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("Luxemburg norm oracles") {
  const auto x = parse_field("x", 1);
  CHECK(luxemburg_norm(RandomField::constant(1, 0.0), YoungFunction::cosh2(), I1()).value == 0.0);

  const NormResult r = luxemburg_norm(x, YoungFunction::cosh2(), I1());
  CHECK_FALSE(r.diverged);
  CHECK(r.value == doctest::Approx(1.0 / std::sqrt(2.0 * std::log(2.0))).epsilon(1e-12));
  CHECK(r.residual < 1e-8);
  CHECK(r.bracket_lo <= r.value);
  CHECK(r.value <= r.bracket_hi);

  const NormResult s = luxemburg_norm(parse_field("x^2", 1), YoungFunction::cosh2(), I1());
  CHECK(s.value == doctest::Approx(x_squared_cosh2_norm()).epsilon(1e-10));
}

TEST_CASE("power norm follows the defining equation") {
  // ∫(|x|/ρ)²/2 dγ = 1 gives ρ = 1/√2
  const NormResult r = luxemburg_norm(parse_field("x", 1), YoungFunction::power(2), I1());
  CHECK(r.value == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  for (double a : {1.5, 2.0, 3.0}) {
    CAPTURE(a);
    const auto f = parse_field("H2/2", 1);
    const double la = std::pow(expect_transform(I1(), f, [a](double v) { return std::pow(std::abs(v), a); }).value(),
                               1.0 / a);
    CHECK(luxemburg_norm(f, YoungFunction::power(a), I1()).value == doctest::Approx(std::pow(a, -1.0 / a) * la).epsilon(1e-9));
  }
}

TEST_CASE("modular is decreasing across the bracket") {
  const auto f = parse_field("H2/2", 1);
  const auto phi = YoungFunction::cosh2();
  const NormResult r = luxemburg_norm(f, phi, I1());
  auto m = [&](double rho) {
    const Estimate e = expect_transform(I1(), f, [&](double v) { return phi(v / rho); });
    return e.diverged() ? INFINITY : e.value();
  };
  CHECK(m(r.bracket_lo * 0.9) > 1.0);
  CHECK(m(r.bracket_hi * 1.1) < 1.0);
  CHECK(m(0.5 * r.value) > m(r.value));
}

TEST_CASE("not in L^Phi") {
  const NormResult r = luxemburg_norm(parse_field("exp(x^2)", 1), YoungFunction::cosh2(), I1());
  CHECK(r.diverged);
  CHECK(r.reason.find("not in L^Φ") != std::string::npos);
  CHECK(luxemburg_norm(parse_field("x^2", 1), YoungFunction::gauss2(), I1()).diverged);
  CHECK(luxemburg_norm(parse_field("x^3", 1), YoungFunction::cosh2(), I1()).diverged);
  CHECK_FALSE(luxemburg_norm(parse_field("x", 1), YoungFunction::gauss2(), I1()).diverged);
}

TEST_CASE("dual norm") {
  CHECK(dual_norm(RandomField::constant(1, 0.0), YoungFunction::power(2), I1()).value == 0.0);
  const NormResult d = dual_norm(parse_field("x", 1), YoungFunction::power(2), I1());
  const NormResult l = luxemburg_norm(parse_field("x", 1), YoungFunction::power(2), I1());
  CHECK(d.value >= l.value * (1 - 1e-9));
  CHECK(d.value <= 2 * l.value * (1 + 1e-9));
  // inf_k (1 + k²/2)/k = √2
  CHECK(d.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  for (const char* spec : {"tanh(x)", "x^2", "relu(x)"}) {
    CAPTURE(spec);
    const auto f = parse_field(spec, 1);
    const double dv = dual_norm(f, YoungFunction::cosh2(), I1()).value;
    const double lv = luxemburg_norm(f, YoungFunction::cosh2(), I1()).value;
    CHECK(dv >= lv * (1 - 1e-9));
    CHECK(dv <= 2 * lv * (1 + 1e-9));
  }
}

TEST_CASE("moment norm") {
  const MomentNormResult m = moment_norm(parse_field("x", 1), I1());
  CHECK(m.value == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(m.argmax == 1);
  CHECK(moment_norm(RandomField::constant(1, 0.0), I1()).value == 0.0);
  const MomentNormResult e = moment_norm(parse_field("exp(x^2)", 1), I1());
  CHECK(e.diverged);
  CHECK(e.diverged_at == 1);
  double prev = 0.0;
  for (int k : {1, 2, 5, 10, 20}) {
    const double v = moment_norm(parse_field("x^2", 1), I1(), k).value;
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("tail certificate") {
  const std::vector<double> grid = {3.0};
  const TailCertificate c = tail_certificate(parse_field("x", 1), I1(), grid);
  CHECK(c.rows[0].probability == doctest::Approx(std::erfc(3.0 / std::sqrt(2.0))).epsilon(1e-9));
  CHECK(c.rows[0].probability == doctest::Approx(0.0027).epsilon(0.01));
  CHECK(c.rows[0].bound == doctest::Approx(4.0 * std::exp(-3.0 / 0.849321800288)).epsilon(1e-9));
  CHECK(c.pass);

  const TailCertificate z = tail_certificate(RandomField::constant(1, 0.0), I1(), grid);
  CHECK(z.pass);

  std::vector<double> ts;
  for (int i = 1; i <= 10; ++i) ts.push_back(i);
  CHECK(tail_certificate(parse_field("x^2", 1), I1(), ts).pass);
  CHECK_THROWS_AS(tail_certificate(parse_field("exp(x^2)", 1), I1(), ts), DomainError);
}

TEST_CASE("Orlicz class") {
  const auto grid = default_lambda_grid();
  CHECK(orlicz_class_member(parse_field("x", 1), I1(), grid).in_M);
  const ClassVerdict v = orlicz_class_member(parse_field("x^2", 1), I1(), grid);
  CHECK_FALSE(v.in_M);
  REQUIRE(v.max_finite_lambda);
  CHECK(*v.max_finite_lambda >= 0.49);
  CHECK(*v.max_finite_lambda < 0.5);
  CHECK(orlicz_class_member(parse_field("trunc:5:x^2", 1), I1(), grid).in_M);
}

TEST_CASE("truncation convergence") {
  const std::vector<double> N = {1, 2, 4, 8};
  const auto lin = truncation_convergence(parse_field("x", 1), YoungFunction::cosh2(), I1(), N, 1.0);
  for (std::size_t i = 1; i < lin.size(); ++i) CHECK(lin[i].value.value() < lin[i - 1].value.value());
  CHECK(lin.back().value.value() < 1e-6);
  for (const auto& row : truncation_convergence(parse_field("x^2", 1), YoungFunction::cosh2(), I1(), N, 0.6))
    CHECK(row.value.diverged());
  const auto bounded = truncation_convergence(parse_field("trunc:3:x^2", 1), YoungFunction::cosh2(), I1(), N, 1.0);
  CHECK(bounded[2].value.value() == 0.0);
  CHECK(bounded[3].value.value() == 0.0);
}

TEST_CASE("two-dimensional norm") {
  const auto I = GaussianIntegrator::standard(2);
  // x₁ in two dimensions has the same law as x in one
  CHECK(luxemburg_norm(parse_field("x1", 2), YoungFunction::cosh2(), I).value ==
        doctest::Approx(0.849321800288).epsilon(1e-10));
}
