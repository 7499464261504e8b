#include "orlicz/cli.hpp"

#include "orlicz/estimate.hpp"
#include "orlicz/exponential_manifold.hpp"
#include "orlicz/finite_oracle.hpp"
#include "orlicz/hermite_calculus.hpp"
#include "orlicz/orlicz_norms.hpp"
#include "orlicz/orlicz_sobolev.hpp"
#include "orlicz/random_field.hpp"
#include "orlicz/young.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

namespace orlicz::cli {

using json = nlohmann::json;

json RunConfig::to_json() const {
  return {{"backend", backend}, {"dim", dim},         {"order", order},   {"samples", samples},
          {"seed", seed},       {"rel_tol", rel_tol}, {"format", format}, {"fields", fields}};
}

RunConfig RunConfig::from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  static const char* known[] = {"backend", "dim", "order", "samples", "seed", "rel_tol", "format", "fields"};
  for (const auto& [key, _] : j.items())
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) == std::end(known))
      throw std::invalid_argument("config: unknown key '" + key + "'");
  RunConfig c;
  c.backend = j.value("backend", c.backend);
  c.dim = j.value("dim", c.dim);
  c.order = j.value("order", c.order);
  c.samples = j.value("samples", c.samples);
  c.seed = j.value("seed", c.seed);
  c.rel_tol = j.value("rel_tol", c.rel_tol);
  c.format = j.value("format", c.format);
  c.fields = j.value("fields", c.fields);
  return c;
}

GaussianIntegrator make_integrator(const RunConfig& cfg) {
  if (cfg.dim < 1) throw std::invalid_argument("dimension must be at least 1");
  if (cfg.backend == "adaptive") return GaussianIntegrator::adaptive(cfg.dim, cfg.rel_tol);
  if (cfg.backend == "quadrature") return GaussianIntegrator::quadrature(cfg.dim, cfg.order);
  if (cfg.backend == "montecarlo") return GaussianIntegrator::monte_carlo(cfg.dim, cfg.samples, cfg.seed);
  if (cfg.backend == "auto") {
    if (cfg.dim > 3) return GaussianIntegrator::monte_carlo(cfg.dim, cfg.samples, cfg.seed);
    return GaussianIntegrator::standard(cfg.dim);
  }
  throw std::invalid_argument("unknown backend '" + cfg.backend + "' (expected auto, adaptive, quadrature, montecarlo)");
}

namespace {

std::string format_number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  std::string s = buf;
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

void dump_to(const json& j, int indent, int depth, std::string& out) {
  auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case json::value_t::number_float:
      out += format_number(j.get<double>());
      return;
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        dump_to(v, indent, depth + 1, out);
      }
      newline(depth);
      out += ']';
      return;
    }
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, v] : j.items()) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += json(key).dump();
        out += indent < 0 ? ":" : ": ";
        dump_to(v, indent, depth + 1, out);
      }
      newline(depth);
      out += '}';
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump(const json& j, int indent) {
  std::string out;
  dump_to(j, indent, 0, out);
  return out;
}

namespace {

// A domain verdict or failed precondition: serialized, exit code 2.
struct Outcome {
  Outcome(json b, int c, std::string text = {}) : body(std::move(b)), code(c), csv(std::move(text)) {}
  json body;
  int code = 0;
  std::string csv;  // used instead of body when non-empty
};

json verdict(const Estimate& e) {
  if (e.diverged()) return {{"diverged", true}};
  return {{"finite", e.value()}};
}

json verdict(const NormResult& r) {
  if (r.diverged) return {{"diverged", true}};
  return {{"finite", r.value}};
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::string s = text;
  std::replace_if(s.begin(), s.end(), [](char c) { return c == '[' || c == ']' || c == ','; }, ' ');
  std::istringstream is(s);
  std::vector<double> out;
  std::string tok;
  while (is >> tok) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw std::invalid_argument(std::string("malformed number '") + tok + "' in " + what);
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument(std::string("empty list for ") + what);
  return out;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(to_json(Eigen::VectorXd(m.row(i).transpose())));
  return rows;
}

json norm_json(const NormResult& r) {
  json j = {{"method", r.method}, {"evaluations", r.evaluations}, {"verdict", verdict(r)}};
  if (r.diverged) {
    j["reason"] = r.reason;
  } else {
    j["value"] = r.value;
    j["residual"] = r.residual;
    j["bracket"] = {r.bracket_lo, r.bracket_hi};
  }
  return j;
}

json sobolev_json(const SobolevReport& r) {
  json grads = json::array();
  for (const auto& g : r.grad_norms) grads.push_back(verdict(g));
  json j = {{"member", r.member}, {"f_norm", verdict(r.f_norm)}, {"grad_norms", grads}};
  j["total"] = r.member ? json{{"finite", r.total}} : json{{"diverged", true}};
  if (!r.reason.empty()) j["reason"] = r.reason;
  return j;
}

json series_json(const HermiteSeries& s) {
  json out = json::array();
  for (const auto& [alpha, c] : s.coefficients()) out.push_back({{"alpha", alpha}, {"c", c}});
  return out;
}

json polynomial_json(const Polynomial& p) {
  json out = json::array();
  for (const auto& [alpha, c] : p.coefficients()) out.push_back({{"alpha", alpha}, {"c", c}});
  return out;
}

std::string polynomial_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = p.coefficients().rbegin(); it != p.coefficients().rend(); ++it) {
    const auto& [alpha, c] = *it;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", std::abs(c));
    os << (first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "));
    std::vector<std::string> factors;
    if (total_degree(alpha) == 0 || std::abs(c) != 1.0) factors.emplace_back(buf);
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (alpha[i] == 0) continue;
      std::string v = alpha.size() == 1 ? "x" : "x" + std::to_string(i + 1);
      if (alpha[i] > 1) v += "^" + std::to_string(alpha[i]);
      factors.push_back(v);
    }
    for (std::size_t i = 0; i < factors.size(); ++i) os << (i ? "*" : "") << factors[i];
    first = false;
  }
  return os.str();
}

std::string fmt(double v) {
  if (!std::isfinite(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct Context {
  RunConfig cfg;
  bool dump_config = false;
  std::string config_path;
};

void add_common(CLI::App* sub, Context& ctx) {
  sub->add_option("--n", ctx.cfg.dim, "Dimension of the Gaussian space");
  sub->add_option("--backend", ctx.cfg.backend, "Integrator: auto, adaptive, quadrature, montecarlo")
      ->check(CLI::IsMember({"auto", "adaptive", "quadrature", "montecarlo"}));
  sub->add_option("--order", ctx.cfg.order, "Gauss-Hermite nodes per axis");
  sub->add_option("--samples", ctx.cfg.samples, "Monte Carlo sample count");
  sub->add_option("--seed", ctx.cfg.seed, "Monte Carlo seed (overrides ORLICZ_IG_SEED and the config file)");
  sub->add_option("--rel-tol", ctx.cfg.rel_tol, "Relative tolerance of the adaptive backend");
  sub->add_option("--format", ctx.cfg.format, "Output format: auto, json, csv")
      ->check(CLI::IsMember({"auto", "json", "csv"}));
  sub->add_option("--config", ctx.config_path, "JSON run configuration");
  sub->add_flag("--dump-config", ctx.dump_config, "Print the effective configuration and exit");
}

const std::string& field_spec(const std::string& flag_value, const RunConfig& cfg, std::size_t index,
                              const char* name) {
  if (!flag_value.empty()) return flag_value;
  if (index < cfg.fields.size()) return cfg.fields[index];
  throw std::invalid_argument(std::string("missing ") + name);
}

bool wants_csv(const RunConfig& cfg, bool default_csv) {
  return cfg.format == "csv" || (cfg.format == "auto" && default_csv);
}

void no_csv(const RunConfig& cfg, const std::string& command) {
  if (cfg.format == "csv") throw std::invalid_argument("csv output is not available for " + command);
}

std::vector<double> default_t_grid() {
  std::vector<double> t;
  for (int i = 1; i <= 20; ++i) t.push_back(0.5 * i);
  return t;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context ctx;

  // Config file first, then the environment, then explicit flags (bound below).
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size())
      path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      path = args[i].substr(9);
    if (path.empty()) continue;
    std::ifstream in(path);
    if (!in) {
      err << "error: cannot open config file '" << path << "'\n";
      return 1;
    }
    try {
      ctx.cfg = RunConfig::from_json(json::parse(in));
    } catch (const std::exception& e) {
      err << "error: invalid config file '" << path << "': " << e.what() << "\n";
      return 1;
    }
  }
  if (const char* env = std::getenv("ORLICZ_IG_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      ctx.cfg.seed = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      err << "error: ORLICZ_IG_SEED must be an unsigned integer\n";
      return 1;
    }
  }

  CLI::App app{"Orlicz spaces and exponential models on the standard Gaussian space", "orlicz-ig"};
  app.require_subcommand(1, 1);
  app.fallthrough(false);

  std::map<std::string, std::function<Outcome()>> handlers;
  auto command = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, ctx);
    return sub;
  };
  RunConfig& cfg = ctx.cfg;

  // norm
  std::string phi_name = "cosh2", f_spec, g_spec, u_spec, q_spec;
  {
    auto* sub = command("norm", "Luxemburg norm inf{rho > 0 : E[Phi(|f|/rho)] <= 1}");
    sub->add_option("--phi", phi_name, "Young function name")->capture_default_str();
    sub->add_option("--f", f_spec, "Field: preset name or JSON expression");
    handlers["norm"] = [&] {
      const auto I = make_integrator(cfg);
      const auto f = parse_field(field_spec(f_spec, cfg, 0, "--f"), cfg.dim);
      const auto phi = YoungFunction::parse(phi_name);
      no_csv(cfg, "norm");
      const NormResult r = luxemburg_norm(f, phi, I);
      json j = norm_json(r);
      j["phi"] = phi.name();
      return Outcome{j, r.diverged ? 2 : 0};
    };
  }
  {
    auto* sub = command("dualnorm", "Orlicz (Amemiya) norm inf_k (1 + E[Phi(k|f|)])/k");
    sub->add_option("--phi", phi_name, "Young function name")->capture_default_str();
    sub->add_option("--f", f_spec, "Field");
    handlers["dualnorm"] = [&] {
      const auto I = make_integrator(cfg);
      const auto f = parse_field(field_spec(f_spec, cfg, 0, "--f"), cfg.dim);
      const auto phi = YoungFunction::parse(phi_name);
      no_csv(cfg, "dualnorm");
      const NormResult d = dual_norm(f, phi, I);
      const NormResult l = luxemburg_norm(f, phi, I);
      json j = {{"phi", phi.name()}, {"method", d.method}, {"verdict", verdict(d)}, {"luxemburg", verdict(l)}};
      if (!d.diverged) {
        j["value"] = d.value;
        if (l.value > 0.0) j["ratio"] = d.value / l.value;
      } else {
        j["reason"] = d.reason;
      }
      return Outcome{j, d.diverged ? 2 : 0};
    };
  }
  int k_max = 20;
  {
    auto* sub = command("momentnorm", "max_k ((2k)!^-1 E f^2k)^(1/2k) over k = 1..k_max");
    sub->add_option("--f", f_spec, "Field");
    sub->add_option("--kmax", k_max, "Largest moment order")->capture_default_str();
    handlers["momentnorm"] = [&] {
      const auto I = make_integrator(cfg);
      const auto f = parse_field(field_spec(f_spec, cfg, 0, "--f"), cfg.dim);
      const MomentNormResult r = moment_norm(f, I, k_max);
      if (wants_csv(cfg, false)) {
        std::string csv = "k,term\n";
        for (std::size_t i = 0; i < r.terms.size(); ++i) csv += std::to_string(i + 1) + "," + fmt(r.terms[i]) + "\n";
        return Outcome{{}, r.diverged ? 2 : 0, csv};
      }
      json j = {{"k_max", k_max}, {"terms", r.terms}};
      if (r.diverged) {
        j["verdict"] = {{"diverged", true}};
        j["diverged_at"] = r.diverged_at;
      } else {
        j["verdict"] = {{"finite", r.value}};
        j["value"] = r.value;
        j["argmax"] = r.argmax;
      }
      return Outcome{j, r.diverged ? 2 : 0};
    };
  }
  std::string t_grid;
  {
    auto* sub = command("tailcert", "Tail bound gamma(|f| > t) <= 4 exp(-t/rho) with rho the cosh2 norm (CSV)");
    sub->add_option("--f", f_spec, "Field");
    sub->add_option("--t-grid", t_grid, "Thresholds, comma separated (default 0.5, 1, ..., 10)");
    handlers["tailcert"] = [&] {
      const auto I = make_integrator(cfg);
      const auto f = parse_field(field_spec(f_spec, cfg, 0, "--f"), cfg.dim);
      const std::vector<double> grid = t_grid.empty() ? default_t_grid() : parse_list(t_grid, "--t-grid");
      const NormResult rho = luxemburg_norm(f, YoungFunction::cosh2(), I);
      if (rho.diverged) return Outcome{{{"rho", verdict(rho)}, {"reason", rho.reason}}, 2};
      const TailCertificate c = tail_certificate(f, I, grid);
      if (wants_csv(cfg, true)) {
        std::string csv = "t,empirical_tail,bound\n";
        for (const auto& r : c.rows) csv += fmt(r.t) + "," + fmt(r.probability) + "," + fmt(r.bound) + "\n";
        return Outcome{{}, 0, csv};
      }
      json rows = json::array();
      for (const auto& r : c.rows)
        rows.push_back({{"t", r.t}, {"empirical_tail", r.probability}, {"error_bound", r.error_bound},
                        {"bound", r.bound}, {"pass", r.pass}});
      return Outcome{{{"rho", c.rho.value}, {"rows", rows}, {"pass", c.pass}}, 0};
    };
  }
  std::string lambdas;
  {
    auto* sub = command("class", "Orlicz class M: finiteness of E exp(lambda |f|) over a lambda grid");
    sub->add_option("--f", f_spec, "Field");
    sub->add_option("--lambdas", lambdas, "lambda grid, comma separated (default brackets 1/2)");
    handlers["class"] = [&] {
      const auto I = make_integrator(cfg);
      const auto f = parse_field(field_spec(f_spec, cfg, 0, "--f"), cfg.dim);
      const std::vector<double> grid = lambdas.empty() ? default_lambda_grid() : parse_list(lambdas, "--lambdas");
      const ClassVerdict v = orlicz_class_member(f, I, grid);
      const int code = v.in_M ? 0 : 2;
      if (wants_csv(cfg, false)) {
        std::string csv = "lambda,diverged,mgf\n";
        for (const auto& r : v.rows)
          csv += fmt(r.lambda) + "," + (r.mgf.diverged() ? "1," : "0,") +
                 (r.mgf.diverged() ? "" : fmt(r.mgf.value())) + "\n";
        return Outcome{{}, code, csv};
      }
      json rows = json::array();
      for (const auto& r : v.rows) rows.push_back({{"lambda", r.lambda}, {"mgf", verdict(r.mgf)}});
      return Outcome{{{"in_M", v.in_M},
                      {"max_finite_lambda", opt(v.max_finite_lambda)},
                      {"min_diverged_lambda", opt(v.min_diverged_lambda)},
                      {"rows", rows}},
                     code};
    };
  }
  double lambda = 1.0;
  std::string n_list = "1,2,4,8";
  {
    auto* sub = command("truncation", "E[Phi(lambda (f - f 1(|x| <= N)))] for a list of N");
    sub->add_option("--f", f_spec, "Field");
    sub->add_option("--phi", phi_name, "Young function name")->capture_default_str();
    sub->add_option("--lambda", lambda, "Scale lambda")->capture_default_str();
    sub->add_option("--N", n_list, "Truncation radii, comma separated")->capture_default_str();
    handlers["truncation"] = [&] {
      const auto I = make_integrator(cfg);
      const auto f = parse_field(field_spec(f_spec, cfg, 0, "--f"), cfg.dim);
      const auto phi = YoungFunction::parse(phi_name);
      const std::vector<double> N = parse_list(n_list, "--N");
      const auto rows = truncation_convergence(f, phi, I, N, lambda);
      const bool any_diverged = std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.value.diverged(); });
      const int code = any_diverged ? 2 : 0;
      if (wants_csv(cfg, false)) {
        std::string csv = "N,diverged,value\n";
        for (const auto& r : rows)
          csv += fmt(r.N) + "," + (r.value.diverged() ? "1," : "0,") +
                 (r.value.diverged() ? "" : fmt(r.value.value())) + "\n";
        return Outcome{{}, code, csv};
      }
      json out_rows = json::array();
      for (const auto& r : rows) out_rows.push_back({{"N", r.N}, {"value", verdict(r.value)}});
      return Outcome{{{"phi", phi.name()}, {"lambda", lambda}, {"rows", out_rows}}, code};
    };
  }
  double x_arg = 1.0, y_arg = 1.0;
  {
    auto* sub = command("conjugate", "Conjugate Young function with Young and Legendre checks at (x, y)");
    sub->add_option("--phi", phi_name, "Young function name")->capture_default_str();
    sub->add_option("--x", x_arg, "Point x >= 0")->capture_default_str();
    sub->add_option("--y", y_arg, "Point y >= 0")->capture_default_str();
    handlers["conjugate"] = [&] {
      no_csv(cfg, "conjugate");
      const auto phi = YoungFunction::parse(phi_name);
      const auto psi = phi.conjugate();
      const YoungLegendreReport r = check_young_legendre(phi, x_arg, y_arg);
      return Outcome{{{"phi", phi.name()},
                      {"conjugate", psi.name()},
                      {"x", x_arg},
                      {"y", y_arg},
                      {"phi_x", phi(x_arg)},
                      {"psi_y", psi(y_arg)},
                      {"young_gap", r.young_gap},
                      {"legendre_residual", r.legendre_residual}},
                     0};
    };
  }
  std::string small_name, large_name;
  double probe_hi = 1e6;
  {
    auto* sub = command("domination", "Numeric witness that Phi1(x) <= Phi2(k x) for x >= x_bar");
    sub->add_option("--small", small_name, "Dominated Young function")->required();
    sub->add_option("--large", large_name, "Dominating Young function")->required();
    sub->add_option("--probe-hi", probe_hi, "Upper end of the probe range")->capture_default_str();
    handlers["domination"] = [&] {
      no_csv(cfg, "domination");
      const auto a = YoungFunction::parse(small_name);
      const auto b = YoungFunction::parse(large_name);
      const auto ks = default_domination_k_grid();
      const auto xs = default_domination_thresholds();
      const DominationCertificate c = eventually_dominates(a, b, ks, xs, probe_hi);
      json j = {{"small", a.name()}, {"large", b.name()}, {"holds", c.holds}, {"probes", c.probes}};
      if (c.holds) {
        j["k"] = c.k;
        j["x_bar"] = c.x_bar;
        j["probe_range"] = {c.probe_lo, c.probe_hi};
      }
      return Outcome{j, c.holds ? 0 : 2};
    };
  }
  std::string alpha_list = "3";
  {
    auto* sub = command("hermite", "Hermite polynomial H_alpha = delta^alpha 1");
    sub->add_option("--alpha", alpha_list, "Multi-index, comma separated")->capture_default_str();
    handlers["hermite"] = [&] {
      no_csv(cfg, "hermite");
      MultiIndex alpha;
      for (double a : parse_list(alpha_list, "--alpha")) {
        if (a < 0 || a != std::floor(a)) throw std::invalid_argument("--alpha entries must be nonnegative integers");
        alpha.push_back(static_cast<int>(a));
      }
      const Polynomial p = hermite_polynomial(alpha);
      json table = json::array();
      if (alpha.size() == 1) {
        for (double t : {-2.0, -1.0, 0.0, 1.0, 2.0}) table.push_back({{"t", t}, {"value", p(Eigen::VectorXd::Constant(1, t))}});
      }
      return Outcome{{{"alpha", alpha},
                      {"polynomial", polynomial_string(p)},
                      {"coefficients", polynomial_json(p)},
                      {"norm_squared", multi_factorial(alpha)},
                      {"values", table}},
                     0};
    };
  }
  int degree = 6;
  {
    auto* sub = command("expand", "Hermite expansion of a field with Parseval error table");
    sub->add_option("--f", f_spec, "Field");
    sub->add_option("--degree", degree, "Largest total degree")->capture_default_str();
    handlers["expand"] = [&] {
      const auto I = make_integrator(cfg);
      const auto f = parse_field(field_spec(f_spec, cfg, 0, "--f"), cfg.dim);
      const Expansion e = expand(f, degree, I);
      if (wants_csv(cfg, false)) {
        std::string csv = "degree,error\n";
        for (std::size_t d = 0; d < e.error_by_degree.size(); ++d)
          csv += std::to_string(d) + "," + fmt(e.error_by_degree[d]) + "\n";
        return Outcome{{}, 0, csv};
      }
      return Outcome{{{"coefficients", series_json(e.series)},
                      {"second_moment", e.second_moment},
                      {"error_by_degree", e.error_by_degree},
                      {"reconstruction_error", e.reconstruction_error},
                      {"integrator", e.integrator}},
                     0};
    };
  }
  bool auto_center = false;
  {
    auto* sub = command("k1", "Cumulant K1(u) = log E[exp u] of a centered u");
    sub->add_option("--u", u_spec, "Centered field");
    sub->add_flag("--auto-center", auto_center, "Subtract E[u] first");
    handlers["k1"] = [&] {
      no_csv(cfg, "k1");
      const auto I = make_integrator(cfg);
      const auto u = parse_field(field_spec(u_spec, cfg, 0, "--u"), cfg.dim);
      const Estimate e = k1(u, I, auto_center);
      json j = {{"verdict", verdict(e)}};
      if (e.diverged()) {
        j["reason"] = e.reason();
        return Outcome{j, 2};
      }
      j["value"] = e.value();
      j["error_bound"] = e.error_bound();
      return Outcome{j, 0};
    };
  }
  double norm_tol = 1e-6;
  {
    auto* sub = command("chart", "Exponential chart u = log q - E[log q] of a density q");
    sub->add_option("--q", q_spec, "Density with respect to gamma");
    sub->add_option("--norm-tol", norm_tol, "Tolerance on |E[q] - 1|")->capture_default_str();
    handlers["chart"] = [&] {
      no_csv(cfg, "chart");
      const auto I = make_integrator(cfg);
      const auto q = parse_field(field_spec(q_spec, cfg, 0, "--q"), cfg.dim);
      const RandomField u = chart(q, I, norm_tol);
      const Estimate mean = expect(I, u);
      const Estimate k = k1(u, I, true);
      return Outcome{{{"u", u.to_json()}, {"mean_u", verdict(mean)}, {"k1", verdict(k)}}, 0};
    };
  }
  std::vector<std::string> stat_specs;
  std::string theta_list;
  bool center_stats = false;
  double fd_step = 1e-3;
  {
    auto* sub = command("fisher", "Cumulant and Fisher information by covariance and by Hessian of kappa");
    sub->add_option("--u", stat_specs, "Sufficient statistics (repeat the flag)");
    sub->add_option("--theta", theta_list, "Natural parameter, comma separated or JSON array")->required();
    sub->add_flag("--center", center_stats, "Center the statistics under gamma first");
    sub->add_option("--step", fd_step, "Finite-difference step")->capture_default_str();
    handlers["fisher"] = [&] {
      no_csv(cfg, "fisher");
      const auto I = make_integrator(cfg);
      const std::vector<std::string>& specs = stat_specs.empty() ? cfg.fields : stat_specs;
      if (specs.empty()) throw std::invalid_argument("missing --u");
      ExpFamily F;
      for (const auto& s : specs) {
        RandomField u = parse_field(s, cfg.dim);
        if (center_stats) u = u - expect(I, u).value();
        F.stats.push_back(u);
      }
      const auto theta = parse_list(theta_list, "--theta");
      if (theta.size() != F.stats.size())
        throw DimensionMismatch("--theta has " + std::to_string(theta.size()) + " entries for " +
                                std::to_string(F.stats.size()) + " statistics");
      const FisherReport r = cumulant_and_fisher(F, to_vector(theta), I, fd_step);
      return Outcome{{{"kappa", r.kappa},
                      {"gradient", to_json(r.gradient)},
                      {"fisher_covariance", to_json(r.fisher_covariance)},
                      {"fisher_hessian", to_json(r.fisher_hessian)},
                      {"max_difference", r.max_difference},
                      {"positive_semidefinite", r.positive_semidefinite},
                      {"step", r.step}},
                     0};
    };
  }
  std::string up_spec, uq_spec;
  {
    auto* sub = command("hyvarinen", "Hyvarinen divergence 1/2 E_p|grad u_p - grad u_q|^2");
    sub->add_option("--up", up_spec, "Chart coordinate of p")->required();
    sub->add_option("--uq", uq_spec, "Chart coordinate of q")->required();
    sub->add_flag("--auto-center", auto_center, "Center both fields first");
    handlers["hyvarinen"] = [&] {
      no_csv(cfg, "hyvarinen");
      const auto I = make_integrator(cfg);
      const auto p = ExpModelPoint::make(parse_field(up_spec, cfg.dim), I, auto_center);
      const auto q = ExpModelPoint::make(parse_field(uq_spec, cfg.dim), I, auto_center);
      const Estimate h = hyvarinen(p, q, I);
      json j = {{"verdict", verdict(h)}};
      if (h.diverged()) return Outcome{j, 2};
      j["value"] = h.value();
      return Outcome{j, 0};
    };
  }
  {
    auto* sub = command("otto", "Otto inner product E_p[grad f . grad g] with its divergence form");
    sub->add_option("--f", f_spec, "First field");
    sub->add_option("--g", g_spec, "Second field");
    sub->add_option("--u", u_spec, "Chart coordinate of p (default 0)");
    sub->add_flag("--auto-center", auto_center, "Center u first");
    handlers["otto"] = [&] {
      no_csv(cfg, "otto");
      const auto I = make_integrator(cfg);
      const auto f = parse_field(field_spec(f_spec, cfg, 0, "--f"), cfg.dim);
      const auto g = parse_field(field_spec(g_spec, cfg, 1, "--g"), cfg.dim);
      const auto p = u_spec.empty() ? ExpModelPoint::reference(cfg.dim)
                                    : ExpModelPoint::make(parse_field(u_spec, cfg.dim), I, auto_center);
      const OttoReport r = otto_inner(f, g, p, I);
      json j = {{"value", verdict(r.value)},
                {"adjoint", verdict(r.adjoint)},
                {"literal_adjoint", verdict(r.literal_adjoint)},
                {"mean_f", r.mean_f},
                {"mean_g", r.mean_g}};
      j["adjoint_residual"] = std::isfinite(r.adjoint_residual) ? json(r.adjoint_residual) : json(nullptr);
      return Outcome{j, r.value.diverged() ? 2 : 0};
    };
  }
  {
    auto* sub = command("logsob", "Entropy E[p log p] against the energy 2 E|grad sqrt p|^2");
    sub->add_option("--u", u_spec, "Chart coordinate of p");
    sub->add_flag("--auto-center", auto_center, "Center u first");
    handlers["logsob"] = [&] {
      no_csv(cfg, "logsob");
      const auto I = make_integrator(cfg);
      const auto p = ExpModelPoint::make(parse_field(field_spec(u_spec, cfg, 0, "--u"), cfg.dim), I, auto_center);
      const LogSobolevReport r = log_sobolev_check(p, I);
      return Outcome{{{"entropy", r.entropy}, {"energy", r.energy}, {"slack", r.slack}, {"holds", r.slack >= -1e-10}},
                     0};
    };
  }
  std::string v1_spec, v2_spec;
  {
    auto* sub = command("sphere", "Bundle-to-sphere map (p, u) -> (2 sqrt p, u sqrt p) and its isometry");
    sub->add_option("--u", u_spec, "Chart coordinate of p");
    sub->add_option("--v1", v1_spec, "First velocity (centered under p before use)")->required();
    sub->add_option("--v2", v2_spec, "Second velocity (centered under p before use)")->required();
    sub->add_flag("--auto-center", auto_center, "Center u first");
    handlers["sphere"] = [&] {
      no_csv(cfg, "sphere");
      const auto I = make_integrator(cfg);
      const auto p = ExpModelPoint::make(parse_field(field_spec(u_spec, cfg, 0, "--u"), cfg.dim), I, auto_center);
      const RandomField dens = p.density();
      const RandomField v1 = parse_field(v1_spec, cfg.dim);
      const RandomField v2 = parse_field(v2_spec, cfg.dim);
      const SphereCheck c = sphere_check(dens, v1 - expect_under(I, v1, dens).value(),
                                         v2 - expect_under(I, v2, dens).value(), I);
      return Outcome{{{"mass", c.mass},
                      {"mean_u1", c.mean_u1},
                      {"mean_u2", c.mean_u2},
                      {"fisher_bundle", c.fisher_bundle},
                      {"fisher_sphere", c.fisher_sphere},
                      {"roundtrip", c.roundtrip}},
                     0};
    };
  }
  std::string p_list, q_list;
  {
    auto* sub = command("portmanteau", "Portmanteau conditions for two probability vectors");
    sub->add_option("--p", p_list, "First probability vector")->required();
    sub->add_option("--q", q_list, "Second probability vector")->required();
    handlers["portmanteau"] = [&] {
      no_csv(cfg, "portmanteau");
      const PortmanteauReport r =
          portmanteau_check(to_vector(parse_list(p_list, "--p")), to_vector(parse_list(q_list, "--q")));
      return Outcome{orlicz::to_json(r), r.all_hold() ? 0 : 2};
    };
  }
  std::string check = "membership", h_list, alpha_grid = "2,4,8", activation = "relu";
  double t_step = 0.1, radius = 2.0;
  int k_embed = 2;
  {
    auto* sub = command("sobolev", "Gaussian Orlicz-Sobolev checks");
    sub->add_option("--check", check, "membership, increment, chain or embedding")
        ->check(CLI::IsMember({"membership", "increment", "chain", "embedding"}))
        ->capture_default_str();
    sub->add_option("--f", f_spec, "Field");
    sub->add_option("--direction", h_list, "Translation direction h for increment (default all ones)");
    sub->add_option("--t", t_step, "Translation step for increment")->capture_default_str();
    sub->add_option("--alphas", alpha_grid, "Lebesgue exponents for increment")->capture_default_str();
    sub->add_option("--activation", activation, "Activation G for chain")->capture_default_str();
    sub->add_option("--radius", radius, "Ball radius for embedding")->capture_default_str();
    sub->add_option("--k", k_embed, "Moment order k for embedding")->capture_default_str();
    handlers["sobolev"] = [&] {
      no_csv(cfg, "sobolev");
      const auto I = make_integrator(cfg);
      const auto f = parse_field(field_spec(f_spec, cfg, 0, "--f"), cfg.dim);
      if (check == "membership") {
        const SobolevReport r = sobolev_membership(f, I);
        return Outcome{sobolev_json(r), r.member ? 0 : 2};
      }
      if (check == "increment") {
        const Eigen::VectorXd h =
            h_list.empty() ? Eigen::VectorXd::Ones(cfg.dim) : to_vector(parse_list(h_list, "--direction"));
        const IncrementReport r = translation_increment_check(f, h, t_step, I, parse_list(alpha_grid, "--alphas"));
        json rows = json::array();
        for (const auto& row : r.rows)
          rows.push_back({{"alpha", row.alpha},
                          {"identity_residual", row.identity_residual},
                          {"identity_residual_gl8", row.identity_residual_gl8},
                          {"remainder", row.remainder},
                          {"remainder_half", row.remainder_half},
                          {"ratio", row.ratio},
                          {"superlinear", row.superlinear}});
        return Outcome{{{"t", t_step}, {"rows", rows}, {"pass", r.pass}}, 0};
      }
      if (check == "chain") {
        const CompositionReport r = lipschitz_composition(parse_activation(activation), f, I);
        return Outcome{{{"membership", sobolev_json(r.membership)},
                        {"chain_residual", r.chain_residual},
                        {"lipschitz_constant", r.lipschitz_constant},
                        {"lipschitz_holds", r.lipschitz_holds}},
                       r.membership.member ? 0 : 2};
      }
      const EmbeddingReport r = local_embedding_bound(f, radius, k_embed, I);
      json j = {{"radius", radius},  {"k", k_embed},   {"lhs", r.lhs}, {"pass", r.pass}, {"pass_homogeneous", r.pass_homogeneous}};
      if (std::isfinite(r.norm)) {
        j["norm"] = r.norm;
        j["rhs"] = r.rhs;
        j["rhs_homogeneous"] = r.rhs_homogeneous;
      } else {
        j["norm"] = {{"diverged", true}};
      }
      return Outcome{j, std::isfinite(r.norm) ? 0 : 2};
    };
  }
  std::string out_path;
  {
    auto* sub = command("gen-fixtures", "Regenerate the oracle fixture set");
    sub->add_option("--out", out_path, "Output file (stdout when absent)");
    handlers["gen-fixtures"] = [&] {
      no_csv(cfg, "gen-fixtures");
      json all = generate_fixtures();
      if (out_path.empty()) return Outcome{all, 0};
      std::ofstream file(out_path);
      if (!file) throw std::invalid_argument("cannot write '" + out_path + "'");
      file << dump(all, 2) << "\n";
      return Outcome{{{"written", all.size()}, {"path", out_path}}, 0};
    };
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  if (ctx.dump_config) {
    out << cfg.to_json().dump() << "\n";
    return 0;
  }
  try {
    Outcome o = handlers.at(name)();
    if (!o.csv.empty()) {
      out << o.csv;
    } else {
      out << dump(o.body) << "\n";
    }
    return o.code;
  } catch (const DomainError& e) {
    out << json{{"domain_error", e.what()}}.dump() << "\n";
    return 2;
  } catch (const DivergenceError& e) {
    out << json{{"verdict", {{"diverged", true}}}, {"reason", e.what()}}.dump() << "\n";
    return 2;
  } catch (const DimensionMismatch& e) {
    err << "error: dimension mismatch: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace orlicz::cli
