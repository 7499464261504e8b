// One line per acceptance criterion; exits nonzero when any criterion fails.

#include "orlicz/exponential_manifold.hpp"
#include "orlicz/finite_oracle.hpp"
#include "orlicz/hermite_calculus.hpp"
#include "orlicz/orlicz_norms.hpp"
#include "orlicz/orlicz_sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace orlicz;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

const GaussianIntegrator& I1() {
  static const GaussianIntegrator I = GaussianIntegrator::standard(1);
  return I;
}

const std::vector<const char*> kSubExponential = {"x", "x^2", "H2/2", "tanh(x)", "relu(x)"};

Verdict power_norms() {
  // luxemburg_norm(power(α)) = α^{1/α} ‖f‖_α within 1e-6 relative
  const std::vector<RandomField> fields = {parse_field("x", 1), parse_field("x^2", 1), parse_field("H2/2", 1),
                                           parse_field("0.5*x^2", 1) + parse_field("x", 1), parse_field("H3/6", 1)};
  double worst = 0.0, ratio_exp = 0.0;
  for (double a : {1.5, 2.0, 3.0})
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const auto& f = fields[i];
      const double la =
          std::pow(expect_transform(I1(), f, [a](double v) { return std::pow(std::abs(v), a); }).value(), 1.0 / a);
      const double target = std::pow(a, 1.0 / a) * la;
      const double got = luxemburg_norm(f, YoungFunction::power(a), I1()).value;
      worst = std::max(worst, std::abs(got - target) / target);
      if (a == 2.0 && i == 0) ratio_exp = std::log(got / target) / std::log(a);
    }
  return {worst < 1e-6, fmt("max relative error %.3g; measured/target = alpha^%.4f", worst, ratio_exp)};
}

Verdict moment_sandwich() {
  double worst_low = 0.0, worst_high = 0.0;
  bool ok = true;
  for (const char* spec : kSubExponential) {
    const auto f = parse_field(spec, 1);
    const double m = moment_norm(f, I1(), 20).value;
    const double l = luxemburg_norm(f, YoungFunction::cosh2(), I1()).value;
    ok = ok && m <= l && l <= std::sqrt(2.0) * m * (1 + 1e-3);
    worst_low = std::max(worst_low, m / l);
    worst_high = std::max(worst_high, l / (std::sqrt(2.0) * m));
  }
  return {ok, fmt("max moment/lux %.6f, max lux/(sqrt2 moment) %.6f", worst_low, worst_high)};
}

Verdict tails() {
  std::vector<double> grid;
  for (int i = 1; i <= 20; ++i) grid.push_back(0.5 * i);
  bool ok = true;
  int rows = 0;
  for (const char* spec : kSubExponential) {
    const TailCertificate c = tail_certificate(parse_field(spec, 1), I1(), grid);
    ok = ok && c.pass && c.rows.size() == 20;
    rows += static_cast<int>(c.rows.size());
  }
  return {ok, fmt("%.0f grid rows over %.0f fields", rows, static_cast<double>(kSubExponential.size()))};
}

Verdict class_frontier() {
  const ClassVerdict v = orlicz_class_member(parse_field("x^2", 1), I1(), default_lambda_grid());
  if (!v.max_finite_lambda || !v.min_diverged_lambda) return {false, "no flip in the lambda grid"};
  const bool ok = !v.in_M && *v.max_finite_lambda >= 0.49 && *v.min_diverged_lambda <= 0.51 &&
                  *v.max_finite_lambda < 0.5 && *v.min_diverged_lambda >= 0.5;
  return {ok, fmt("largest finite %.4f, smallest diverged %.4f", *v.max_finite_lambda, *v.min_diverged_lambda)};
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double a : v) x(i++) = a;
  return x;
}

Verdict fisher() {
  double worst = 0.0;
  const ExpFamily lin{{parse_field("x", 1)}};
  const ExpFamily two{{parse_field("x", 1), parse_field("H2/1.4142135623730951", 1)}};
  const ExpFamily three{{parse_field("x", 1), parse_field("H2/2", 1), parse_field("tanh(x)", 1)}};
  worst = std::max(worst, cumulant_and_fisher(lin, vec({0.4}), I1()).max_difference);
  worst = std::max(worst, cumulant_and_fisher(two, vec({0.3, -0.2}), I1()).max_difference);
  worst = std::max(worst, cumulant_and_fisher(three, vec({0.1, 0.05, 0.3}), I1()).max_difference);
  double lin_err = 0.0;
  for (double th : {-1.0, 0.0, 0.5, 1.0})
    lin_err = std::max(lin_err, std::abs(cumulant_and_fisher(lin, vec({th}), I1()).fisher_covariance(0, 0) - 1.0));
  return {worst < 1e-4 && lin_err < 1e-8, fmt("max route difference %.3g, linear |I - 1| %.3g", worst, lin_err)};
}

Verdict ibp() {
  double worst = 0.0;
  for (int a = 0; a <= 5; ++a)
    for (int b = 0; b <= 5; ++b) {
      const auto f = RandomField::hermite(HermiteSeries::basis({a}));
      const auto g = RandomField::hermite(HermiteSeries::basis({b}));
      worst = std::max(worst, ibp_check(f, g, 0, I1()).residual);
    }
  return {worst < 1e-8, fmt("max residual %.3g over 36 pairs", worst)};
}

Verdict hyvarinen_closed_form() {
  double worst = 0.0;
  for (auto [a, b] : {std::pair{0.0, 1.0}, {0.5, -0.5}, {1.0, 1.0}}) {
    const auto p = ExpModelPoint::make(parse_field("tilt:" + std::to_string(a), 1), I1());
    const auto q = ExpModelPoint::make(parse_field("tilt:" + std::to_string(b), 1), I1());
    worst = std::max(worst, std::abs(hyvarinen(p, q, I1()).value() - 0.5 * (a - b) * (a - b)));
  }
  return {worst < 1e-8, fmt("max error %.3g", worst)};
}

Verdict oracle_equivalence() {
  int quantized = 0, agree = 0, portmanteau = 0, portmanteau_ok = 0;
  double worst = 0.0;
  for (const auto& fx : generate_fixtures()) {
    const std::string op = fx.at("operation");
    const auto& in = fx.at("inputs");
    if (op == "portmanteau") {
      ++portmanteau;
      const auto p = in.at("p").get<std::vector<double>>();
      const auto q = in.at("q").get<std::vector<double>>();
      const auto r = exact_portmanteau(Eigen::Map<const Eigen::VectorXd>(p.data(), p.size()),
                                       Eigen::Map<const Eigen::VectorXd>(q.data(), q.size()));
      portmanteau_ok += r.all_hold() && r.log_convex;
      continue;
    }
    ++quantized;
    const int dim = fx.at("space").at("dim");
    const auto I = GaussianIntegrator::quadrature(dim, fx.at("space").at("order"));
    const auto& ex = fx.at("expected");
    std::vector<std::pair<double, double>> pairs;
    if (op == "luxemburg") {
      pairs.emplace_back(luxemburg_norm(parse_field(in.at("f").get<std::string>(), dim), YoungFunction::parse(in.at("phi").get<std::string>()), I).value,
                         ex.at("value"));
    } else if (op == "k1") {
      pairs.emplace_back(k1(parse_field(in.at("u").get<std::string>(), dim), I, true).value(), ex.at("value"));
    } else if (op == "moment") {
      pairs.emplace_back(moment_norm(parse_field(in.at("f").get<std::string>(), dim), I, in.at("k_max")).value, ex.at("value"));
    } else if (op == "fisher") {
      ExpFamily F;
      for (const auto& s : in.at("stats")) {
        const auto f = parse_field(s.get<std::string>(), dim);
        F.stats.push_back(f - expect(I, f).value());
      }
      const auto th = in.at("theta").get<std::vector<double>>();
      const auto r = cumulant_and_fisher(F, Eigen::Map<const Eigen::VectorXd>(th.data(), th.size()), I);
      pairs.emplace_back(r.kappa, ex.at("kappa"));
      const auto fi = ex.at("fisher").get<std::vector<double>>();
      for (std::size_t i = 0; i < fi.size(); ++i) pairs.emplace_back(r.fisher_covariance.data()[i], fi[i]);
    } else if (op == "relative_cumulant") {
      const auto p = ExpModelPoint::make(parse_field(in.at("u_p").get<std::string>(), dim), I, true);
      pairs.emplace_back(relative_cumulant(p, parse_field(in.at("u").get<std::string>(), dim), I, true).value.value(), ex.at("value"));
    }
    bool ok = !pairs.empty();
    for (auto [got, want] : pairs) {
      const double err = std::abs(got - want) / std::max(1.0, std::abs(want));
      worst = std::max(worst, err);
      ok = ok && err <= 1e-10;
    }
    agree += ok;
  }
  const bool pass = quantized >= 50 && agree == quantized && portmanteau_ok == portmanteau;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d/%d fixtures agree (max scaled error %.3g); portmanteau %d/%d", agree, quantized,
                worst, portmanteau_ok, portmanteau);
  return {pass, buf};
}

Verdict sobolev() {
  bool ok = true;
  std::string failed;
  const std::vector<RandomField> quadratics = {RandomField::constant(1, 1.0), parse_field("x", 1), parse_field("x^2", 1),
                                               parse_field("H2/2", 1), parse_field("0.5*x^2", 1) + parse_field("x", 1)};
  for (const auto& f : quadratics)
    if (!sobolev_membership(f, I1()).member) {
      ok = false;
      failed += " member:" + f.to_json().dump();
    }
  if (sobolev_membership(parse_field("exp(x^2)", 1), I1()).member) {
    ok = false;
    failed += " exp(x^2) accepted";
  }
  double worst_ratio = 0.0;
  for (const char* spec : {"x^2", "H3/6", "tanh(x)"}) {
    const auto r = translation_increment_check(parse_field(spec, 1), vec({1.0}), 0.1, I1());
    for (const auto& row : r.rows) worst_ratio = std::max(worst_ratio, row.ratio);
    if (!r.pass) {
      ok = false;
      failed += std::string(" increment:") + spec;
    }
  }
  for (const char* spec : kSubExponential)
    for (double radius : {1.0, 2.0})
      for (int k : {1, 2}) {
        const auto e = local_embedding_bound(parse_field(spec, 1), radius, k, I1());
        if (!e.pass) {
          ok = false;
          failed += std::string(" embedding:") + spec;
        }
      }
  return {ok, fmt("max step-halving ratio %.4f", worst_ratio) + (failed.empty() ? "" : ";" + failed)};
}

Verdict truncation() {
  const std::vector<double> N = {1, 2, 4, 8};
  const auto sq = truncation_convergence(parse_field("x^2", 1), YoungFunction::cosh2(), I1(), N, 0.6);
  const bool all_diverged = std::all_of(sq.begin(), sq.end(), [](const auto& r) { return r.value.diverged(); });
  const auto lin = truncation_convergence(parse_field("x", 1), YoungFunction::cosh2(), I1(), N, 1.0);
  bool decreasing = lin.front().value.is_finite();
  for (std::size_t i = 1; i < lin.size(); ++i)
    decreasing = decreasing && lin[i].value.is_finite() && lin[i].value.value() < lin[i - 1].value.value();
  const double last = lin.back().value.is_finite() ? lin.back().value.value() : INFINITY;
  return {all_diverged && decreasing && last < 1e-6,
          fmt("x^2 all diverged: %.0f; x at N=8: %.3g", all_diverged ? 1.0 : 0.0, last)};
}

}  // namespace

int main() {
  const std::vector<std::function<Verdict()>> criteria = {
      power_norms, moment_sandwich, tails, class_frontier, fisher, ibp, hyvarinen_closed_form,
      oracle_equivalence, sobolev, truncation,
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v{false, ""};
    try {
      v = criteria[i]();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += !v.pass;
    std::printf("criterion %zu: %s  %s\n", i + 1, v.pass ? "PASS" : "FAIL", v.detail.c_str());
  }
  return failures == 0 ? 0 : 1;
}
