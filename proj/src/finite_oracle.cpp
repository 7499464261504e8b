#include "orlicz/finite_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace orlicz {

using nlohmann::json;

Eigen::VectorXd QuantizedGaussian::sample(const RandomField& f) const {
  if (f.dim() != points.rows()) throw DimensionMismatch("quantized Gaussian: field dimension differs");
  Eigen::VectorXd v(points.cols());
  for (Eigen::Index j = 0; j < points.cols(); ++j) v(j) = f(Eigen::VectorXd(points.col(j)));
  return v;
}

QuantizedGaussian quantized_gaussian(int dim, int order) {
  if (dim < 1) throw std::invalid_argument("quantized_gaussian: dim must be ≥ 1");
  const auto rule = gauss_hermite_rule<double>(order);
  Eigen::Index atoms = 1;
  for (int i = 0; i < dim; ++i) atoms *= rule.size();
  Eigen::MatrixXd pts(dim, atoms);
  Eigen::VectorXd w(atoms);
  std::vector<int> idx(dim, 0);
  for (Eigen::Index j = 0; j < atoms; ++j) {
    double wj = 1.0;
    for (int i = 0; i < dim; ++i) {
      pts(i, j) = rule.nodes(idx[i]);
      wj *= rule.weights(idx[i]);
    }
    w(j) = wj;
    int a = dim - 1;
    while (a >= 0 && ++idx[a] == order) idx[a--] = 0;
  }
  // Renormalize so the weights sum to 1 to working precision.
  w /= compensated_sum(w);
  return {FiniteSpace<double>(w), pts};
}

PortmanteauReport exact_portmanteau(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  if (p.size() != q.size()) throw DimensionMismatch("portmanteau: p and q have different lengths");
  if (p.size() < 1) throw std::invalid_argument("portmanteau: empty densities");
  if (!(p.minCoeff() > 0.0) || !(q.minCoeff() > 0.0))
    throw DomainError("portmanteau: zero-probability atom, outside the positive model");
  const FiniteSpace<double> P(p), Q(q);
  const Eigen::Index n = p.size();
  PortmanteauReport r;

  // exponential arc t ↦ p^{1-t} q^t / Z(t) on [-1/4, 5/4]
  for (int k = 0; k <= 10; ++k) r.t.push_back(-0.25 + 0.15 * k);
  const Eigen::ArrayXd lp = p.array().log(), lq = q.array().log();
  for (double t : r.t) {
    const Eigen::ArrayXd s = (1.0 - t) * lp + t * lq;
    const double m = s.maxCoeff();
    const double lz = m + std::log(compensated_sum((s - m).exp()));
    r.log_z.push_back(lz);
    if (!std::isfinite(lz)) r.arc_finite = false;
  }
  for (std::size_t i = 0; i < r.t.size(); ++i)
    for (std::size_t j = i + 2; j < r.t.size(); j += 2) {
      const std::size_t mid = (i + j) / 2;
      const double gap = r.log_z[mid] - 0.5 * (r.log_z[i] + r.log_z[j]);
      r.worst_convexity_gap = std::max(r.worst_convexity_gap, gap);
      if (gap > 1e-13) r.log_convex = false;
    }

  // p/q ∈ L^a(q) and q/p ∈ L^a(p)
  r.exponents = {1.5, 2.0, 4.0};
  for (double a : r.exponents) {
    const double mpq = Q.expect((p.array() / q.array()).pow(a).matrix());
    const double mqp = P.expect((q.array() / p.array()).pow(a).matrix());
    r.moment_p_over_q.push_back(mpq);
    r.moment_q_over_p.push_back(mqp);
    if (!std::isfinite(mpq) || !std::isfinite(mqp)) r.integrability = false;
  }

  // ‖v‖_{cosh₂,p} / ‖v‖_{cosh₂,q} over indicators, centered atoms, sign
  // patterns and seeded Gaussian vectors.
  std::vector<Eigen::VectorXd> probes;
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e(i) = 1.0;
    probes.push_back(e);
    probes.push_back(e - p(i) * Eigen::VectorXd::Ones(n));
    probes.push_back(e - q(i) * Eigen::VectorXd::Ones(n));
  }
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  if (n <= 10) {
    for (long mask = 0; mask < (1L << n); ++mask) {
      Eigen::VectorXd s(n);
      for (Eigen::Index i = 0; i < n; ++i) s(i) = (mask >> i) & 1 ? 1.0 : -1.0;
      probes.push_back(s);
    }
  } else {
    std::bernoulli_distribution coin;
    for (int k = 0; k < 256; ++k) {
      Eigen::VectorXd s(n);
      for (Eigen::Index i = 0; i < n; ++i) s(i) = coin(rng) ? 1.0 : -1.0;
      probes.push_back(s);
    }
  }
  std::normal_distribution<double> normal;
  for (int k = 0; k < 64; ++k) {
    Eigen::VectorXd g(n);
    for (Eigen::Index i = 0; i < n; ++i) g(i) = normal(rng);
    probes.push_back(g);
  }
  const auto cosh2 = YoungFunction::cosh2();
  r.c_lower = std::numeric_limits<double>::infinity();
  r.c_upper = 0.0;
  for (const auto& v : probes) {
    const double np = exact_luxemburg(v, cosh2, P);
    const double nq = exact_luxemburg(v, cosh2, Q);
    if (np == 0.0 || nq == 0.0) continue;
    const double ratio = np / nq;
    r.c_lower = std::min(r.c_lower, ratio);
    r.c_upper = std::max(r.c_upper, ratio);
    ++r.probes;
  }
  return r;
}

json to_json(const PortmanteauReport& r) {
  return {{"t", r.t},
          {"log_z", r.log_z},
          {"arc_finite", r.arc_finite},
          {"log_convex", r.log_convex},
          {"worst_convexity_gap", r.worst_convexity_gap},
          {"exponents", r.exponents},
          {"moment_p_over_q", r.moment_p_over_q},
          {"moment_q_over_p", r.moment_q_over_p},
          {"integrability", r.integrability},
          {"c_lower", r.c_lower},
          {"c_upper", r.c_upper},
          {"probes", r.probes},
          {"all_hold", r.all_hold()}};
}

namespace {

json quantized_space(int dim, int order) { return {{"kind", "quantized_gaussian"}, {"dim", dim}, {"order", order}}; }

json fixture(std::string name, json space, std::string op, json inputs, json expected, double tol) {
  return {{"name", std::move(name)},     {"space", std::move(space)},       {"operation", std::move(op)},
          {"inputs", std::move(inputs)}, {"expected", std::move(expected)}, {"tolerance", tol}};
}

Eigen::VectorXd centered(const Eigen::VectorXd& u, const FiniteSpace<double>& s) {
  return (u.array() - s.expect(u)).matrix();
}

}  // namespace

std::vector<json> generate_fixtures() {
  std::vector<json> out;
  constexpr double tol = 1e-10;

  struct LuxCase {
    const char* f;
    const char* phi;
    int dim;
    int order;
  };
  const LuxCase lux_cases[] = {
      {"x", "cosh2", 1, 40},        {"x", "power:2", 1, 40},       {"x", "power:1.5", 1, 40},
      {"x", "power:3", 1, 40},      {"x", "exp2", 1, 40},          {"x", "gauss2", 1, 40},
      {"x", "sq:cosh2", 1, 40},     {"x^2", "cosh2", 1, 40},       {"x^2", "power:2", 1, 40},
      {"H2/4", "cosh2", 1, 40},     {"H2/2", "exp2", 1, 40},       {"tanh(x)", "cosh2", 1, 40},
      {"relu(x)", "cosh2", 1, 40},  {"|x|", "power:3", 1, 40},     {"0.5*x^2", "cosh2", 1, 40},
      {"tilt:3", "cosh2*", 1, 40},  {"x1", "cosh2", 2, 20},        {"sqnorm", "cosh2", 2, 20},
      {"H(1,1)", "power:2", 2, 20}, {"tanh(x2)", "exp2*", 2, 20},
  };
  for (const auto& c : lux_cases) {
    const auto qg = quantized_gaussian(c.dim, c.order);
    const auto f = qg.sample(parse_field(c.f, c.dim));
    const double v = exact_luxemburg(f, YoungFunction::parse(c.phi), qg.space);
    out.push_back(fixture(std::string("luxemburg ") + c.phi + " " + c.f, quantized_space(c.dim, c.order), "luxemburg",
                          {{"f", c.f}, {"phi", c.phi}, {"dim", c.dim}}, {{"value", v}}, tol));
  }

  struct UCase {
    const char* u;
    int dim;
    int order;
  };
  const UCase k1_cases[] = {{"tilt:0.7", 1, 40}, {"H2/4", 1, 40},   {"tanh(x)", 1, 40},       {"|x|", 1, 40},
                            {"0.3*x^2", 1, 40},  {"relu(x)", 1, 40}, {"softplus(x)", 1, 40}, {"sigmoid(x)", 1, 40},
                            {"x1", 2, 20},       {"0.5*H(1,1)", 2, 20}};
  for (const auto& c : k1_cases) {
    const auto qg = quantized_gaussian(c.dim, c.order);
    const auto u = centered(qg.sample(parse_field(c.u, c.dim)), qg.space);
    out.push_back(fixture(std::string("k1 ") + c.u, quantized_space(c.dim, c.order), "k1",
                          {{"u", c.u}, {"dim", c.dim}, {"center", true}}, {{"value", exact_k1(u, qg.space)}}, tol));
  }

  struct MomentCase {
    const char* f;
    int k_max;
  };
  const MomentCase moment_cases[] = {{"x", 5},       {"x", 12},      {"x^2", 6},       {"H3/6", 4},
                                     {"tanh(x)", 8}, {"relu(x)", 6}, {"0.5*x^2", 10}, {"|x|", 7}};
  for (const auto& c : moment_cases) {
    const auto qg = quantized_gaussian(1, 40);
    const auto f = qg.sample(parse_field(c.f, 1));
    double best = 0.0;
    for (int k = 1; k <= c.k_max; ++k) {
      const double m = qg.space.expect(f.array().square().pow(k).matrix());
      best = std::max(best, std::exp((std::log(m) - std::lgamma(2.0 * k + 1.0)) / (2.0 * k)));
    }
    out.push_back(fixture(std::string("moment ") + c.f + " k_max=" + std::to_string(c.k_max), quantized_space(1, 40),
                          "moment", {{"f", c.f}, {"dim", 1}, {"k_max", c.k_max}}, {{"value", best}}, tol));
  }

  struct FamilyCase {
    std::vector<const char*> stats;
    std::vector<double> theta;
  };
  const FamilyCase family_cases[] = {
      {{"x"}, {0.0}},
      {{"x"}, {0.8}},
      {{"x", "H2/1.4142135623730951"}, {0.0, 0.0}},
      {{"x", "H2/1.4142135623730951"}, {0.3, -0.2}},
      {{"x", "H2/2", "tanh(x)"}, {0.1, 0.05, 0.3}},
      {{"tanh(x)"}, {1.5}},
      {{"x", "tanh(x)"}, {0.2, 0.4}},
  };
  for (const auto& c : family_cases) {
    const auto qg = quantized_gaussian(1, 40);
    Eigen::MatrixXd stats(qg.space.size(), static_cast<Eigen::Index>(c.stats.size()));
    std::vector<std::string> names;
    for (std::size_t i = 0; i < c.stats.size(); ++i) {
      stats.col(static_cast<Eigen::Index>(i)) = centered(qg.sample(parse_field(c.stats[i], 1)), qg.space);
      names.emplace_back(c.stats[i]);
    }
    const Eigen::VectorXd theta = Eigen::Map<const Eigen::VectorXd>(c.theta.data(), c.theta.size());
    const auto fam = exact_family(stats, theta, qg.space);
    std::vector<double> fisher(fam.fisher_covariance.data(), fam.fisher_covariance.data() + fam.fisher_covariance.size());
    std::string name = "fisher";
    for (const auto& s : names) name += " " + s;
    out.push_back(fixture(name, quantized_space(1, 40), "fisher", {{"stats", names}, {"theta", c.theta}, {"dim", 1}},
                          {{"kappa", fam.kappa}, {"fisher", fisher}}, tol));
  }

  struct RelCase {
    const char* u_p;
    const char* u;
  };
  const RelCase rel_cases[] = {{"tilt:0.5", "tilt:0.5"}, {"H2/4", "tilt:0.3"}, {"tanh(x)", "H2/4"},
                               {"tilt:-0.4", "tanh(x)"}, {"sigmoid(x)", "tilt:0.2"}};
  for (const auto& c : rel_cases) {
    const auto qg = quantized_gaussian(1, 40);
    const auto up = centered(qg.sample(parse_field(c.u_p, 1)), qg.space);
    const auto model = exact_model(up, qg.space);
    const Eigen::VectorXd raw = qg.sample(parse_field(c.u, 1));
    const double mean_p = qg.space.expect(model.density.cwiseProduct(raw));
    const Eigen::VectorXd u = (raw.array() - mean_p).matrix();
    out.push_back(fixture(std::string("relative_cumulant ") + c.u_p + " " + c.u, quantized_space(1, 40),
                          "relative_cumulant", {{"u_p", c.u_p}, {"u", c.u}, {"dim", 1}, {"center", true}},
                          {{"value", exact_relative_cumulant(model.density, u, qg.space)}}, tol));
  }

  // Finite portmanteau instances.
  std::vector<std::pair<std::vector<double>, std::vector<double>>> pairs = {
      {{0.25, 0.25, 0.25, 0.25}, {0.25, 0.25, 0.25, 0.25}},
      {{0.25, 0.25, 0.25, 0.25}, {0.4, 0.3, 0.2, 0.1}},
      {{0.5, 0.3, 0.2}, {0.2, 0.3, 0.5}},
      {{0.9, 0.05, 0.05}, {0.01, 0.01, 0.98}},
  };
  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  for (int n : {5, 8, 12}) {
    std::vector<double> p(n), q(n);
    double sp = 0, sq = 0;
    for (int i = 0; i < n; ++i) {
      p[i] = unif(rng);
      q[i] = unif(rng);
      sp += p[i];
      sq += q[i];
    }
    for (int i = 0; i < n; ++i) {
      p[i] /= sp;
      q[i] /= sq;
    }
    pairs.emplace_back(p, q);
  }
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& [p, q] = pairs[k];
    const Eigen::VectorXd P = Eigen::Map<const Eigen::VectorXd>(p.data(), p.size());
    const Eigen::VectorXd Q = Eigen::Map<const Eigen::VectorXd>(q.data(), q.size());
    const auto r = exact_portmanteau(P, Q);
    out.push_back(fixture("portmanteau " + std::to_string(k), {{"kind", "finite"}, {"atoms", p.size()}},
                          "portmanteau", {{"p", p}, {"q", q}},
                          {{"all_hold", r.all_hold()}, {"c_lower", r.c_lower}, {"c_upper", r.c_upper}}, tol));
  }
  return out;
}

}  // namespace orlicz
