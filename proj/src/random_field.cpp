#include "orlicz/random_field.hpp"

#include "orlicz/estimate.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <variant>

namespace orlicz {

// ---------------------------------------------------------------------------
// activations

double apply(Activation g, double t) {
  switch (g) {
    case Activation::Identity: return t;
    case Activation::Relu: return t > 0.0 ? t : 0.0;
    case Activation::Abs: return std::abs(t);
    case Activation::Tanh: return std::tanh(t);
    case Activation::Softplus: return t > 30.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
    case Activation::Sigmoid:
      return t >= 0.0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
    case Activation::Exp: return std::exp(t);
    case Activation::Log: return std::log(t);
    case Activation::Sqrt: return std::sqrt(t);
    case Activation::Reciprocal: return 1.0 / t;
    case Activation::Step: return t > 0.0 ? 1.0 : 0.0;
    case Activation::Sign: return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0);
  }
  return t;
}

namespace {

constexpr std::pair<Activation, std::string_view> kActivationNames[] = {
    {Activation::Identity, "id"},     {Activation::Relu, "relu"},   {Activation::Abs, "abs"},
    {Activation::Tanh, "tanh"},       {Activation::Softplus, "softplus"},
    {Activation::Sigmoid, "sigmoid"}, {Activation::Exp, "exp"},     {Activation::Log, "log"},
    {Activation::Sqrt, "sqrt"},       {Activation::Reciprocal, "recip"},
    {Activation::Step, "step"},       {Activation::Sign, "sign"},
};

}  // namespace

std::string_view activation_name(Activation g) {
  for (const auto& [a, name] : kActivationNames)
    if (a == g) return name;
  return "id";
}

Activation parse_activation(std::string_view name) {
  for (const auto& [a, n] : kActivationNames)
    if (n == name) return a;
  if (name == "identity") return Activation::Identity;
  throw std::invalid_argument("unknown activation '" + std::string(name) + "'");
}

std::optional<double> activation_slope_bound(Activation g) {
  switch (g) {
    case Activation::Identity:
    case Activation::Relu:
    case Activation::Abs:
    case Activation::Tanh:
    case Activation::Softplus: return 1.0;
    case Activation::Sigmoid: return 0.25;
    default: return std::nullopt;
  }
}

bool activation_weakly_differentiable(Activation g) { return g != Activation::Step && g != Activation::Sign; }

// ---------------------------------------------------------------------------
// nodes

struct RandomField::Node {
  struct Coordinate {
    int axis;
  };
  struct Constant {
    double value;
  };
  struct Hermite {
    HermiteSeries series;
  };
  struct Poly {
    Polynomial poly;
  };
  struct SquaredNorm {};
  struct Affine {
    std::vector<std::pair<double, RandomField>> terms;
    double offset;
  };
  struct Product {
    RandomField lhs, rhs;
  };
  struct Compose {
    Activation g;
    RandomField inner;
  };
  struct Truncate {
    RandomField inner;
    double radius;
  };
  struct Translate {
    RandomField inner;
    Eigen::VectorXd shift;
  };

  using Expr = std::variant<Coordinate, Constant, Hermite, Poly, SquaredNorm, Affine, Product, Compose, Truncate,
                            Translate>;

  int dim;
  Expr expr;
};

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

RandomField make(int dim, RandomField::Node::Expr expr) {
  return RandomField(std::make_shared<const RandomField::Node>(RandomField::Node{dim, std::move(expr)}));
}

void require_same_dim(const RandomField& a, const RandomField& b) {
  if (a.dim() != b.dim())
    throw DimensionMismatch("field dimension mismatch: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
}

}  // namespace

RandomField RandomField::coordinate(int dim, int axis) {
  if (dim < 1) throw std::invalid_argument("field dimension must be ≥ 1");
  if (axis < 0 || axis >= dim) throw DimensionMismatch("coordinate axis " + std::to_string(axis) + " out of range");
  return make(dim, Node::Coordinate{axis});
}

RandomField RandomField::constant(int dim, double value) {
  if (dim < 1) throw std::invalid_argument("field dimension must be ≥ 1");
  return make(dim, Node::Constant{value});
}

RandomField RandomField::hermite(HermiteSeries series) {
  const int dim = series.dim();
  if (series.coefficients().empty()) return constant(dim, 0.0);
  if (series.degree() == 0) return constant(dim, series.coefficient(MultiIndex(dim, 0)));
  return make(dim, Node::Hermite{std::move(series)});
}

RandomField RandomField::polynomial(Polynomial poly) {
  const int dim = poly.dim();
  if (poly.is_zero()) return constant(dim, 0.0);
  if (poly.degree() == 0) return constant(dim, poly.coefficient(MultiIndex(dim, 0)));
  return make(dim, Node::Poly{std::move(poly)});
}

RandomField RandomField::squared_norm(int dim) {
  if (dim < 1) throw std::invalid_argument("field dimension must be ≥ 1");
  return make(dim, Node::SquaredNorm{});
}

RandomField RandomField::affine(std::vector<std::pair<double, RandomField>> terms, double offset) {
  if (terms.empty()) throw std::invalid_argument("affine: needs at least one term");
  const int dim = terms.front().second.dim();
  std::vector<std::pair<double, RandomField>> flat;
  for (auto& [c, f] : terms) {
    if (f.dim() != dim) throw DimensionMismatch("affine: terms have different dimensions");
    if (c == 0.0) continue;
    if (auto v = f.constant_value()) {
      offset += c * *v;
      continue;
    }
    if (const auto* a = std::get_if<Node::Affine>(&f.node()->expr)) {
      for (const auto& [ci, fi] : a->terms) flat.emplace_back(c * ci, fi);
      offset += c * a->offset;
      continue;
    }
    flat.emplace_back(c, f);
  }
  // merge terms that share a node
  std::vector<std::pair<double, RandomField>> merged;
  for (auto& [c, f] : flat) {
    auto same = std::find_if(merged.begin(), merged.end(), [&](const auto& m) {
      return m.second.node() == f.node();
    });
    if (same == merged.end())
      merged.emplace_back(c, f);
    else
      same->first += c;
  }
  flat.clear();
  for (auto& t : merged)
    if (t.first != 0.0) flat.push_back(std::move(t));
  if (flat.empty()) return constant(dim, offset);
  if (flat.size() == 1 && flat.front().first == 1.0 && offset == 0.0) return flat.front().second;
  return make(dim, Node::Affine{std::move(flat), offset});
}

RandomField RandomField::product(const RandomField& lhs, const RandomField& rhs) {
  require_same_dim(lhs, rhs);
  if (auto a = lhs.constant_value()) return affine({{*a, rhs}});
  if (auto b = rhs.constant_value()) return affine({{*b, lhs}});
  return make(lhs.dim(), Node::Product{lhs, rhs});
}

RandomField RandomField::compose(Activation g, const RandomField& inner) {
  if (g == Activation::Identity) return inner;
  if (auto v = inner.constant_value()) return constant(inner.dim(), apply(g, *v));
  if (const auto* c = std::get_if<Node::Compose>(&inner.node()->expr)) {
    if (g == Activation::Log && c->g == Activation::Exp) return c->inner;
  }
  return make(inner.dim(), Node::Compose{g, inner});
}

RandomField RandomField::truncate(const RandomField& inner, double radius) {
  if (!(radius >= 0.0)) throw std::invalid_argument("truncation radius must be ≥ 0");
  if (inner.is_zero()) return inner;
  if (std::isinf(radius)) return inner;
  return make(inner.dim(), Node::Truncate{inner, radius});
}

RandomField RandomField::translate(const RandomField& inner, const Eigen::VectorXd& shift) {
  if (shift.size() != inner.dim()) throw DimensionMismatch("translation vector has wrong dimension");
  if (inner.constant_value() || shift.isZero(0.0)) return inner;
  if (const auto* t = std::get_if<Node::Translate>(&inner.node()->expr))
    return translate(t->inner, Eigen::VectorXd(t->shift + shift));
  return make(inner.dim(), Node::Translate{inner, shift});
}

int RandomField::dim() const { return node_->dim; }

double RandomField::operator()(const Eigen::VectorXd& x) const {
  if (x.size() != dim()) throw DimensionMismatch("field evaluated at a point of the wrong dimension");
  return std::visit(
      Overloaded{
          [&](const Node::Coordinate& c) { return x(c.axis); },
          [&](const Node::Constant& c) { return c.value; },
          [&](const Node::Hermite& h) { return h.series(x); },
          [&](const Node::Poly& p) { return p.poly(x); },
          [&](const Node::SquaredNorm&) { return x.squaredNorm(); },
          [&](const Node::Affine& a) {
            double s = a.offset;
            for (const auto& [c, f] : a.terms) s += c * f(x);
            return s;
          },
          [&](const Node::Product& p) {
            const double l = p.lhs(x);
            if (l == 0.0) return 0.0;
            return l * p.rhs(x);
          },
          [&](const Node::Compose& c) { return apply(c.g, c.inner(x)); },
          [&](const Node::Truncate& t) { return x.norm() <= t.radius ? t.inner(x) : 0.0; },
          [&](const Node::Translate& t) { return t.inner(Eigen::VectorXd(x - t.shift)); },
      },
      node_->expr);
}

std::optional<double> RandomField::constant_value() const {
  if (const auto* c = std::get_if<Node::Constant>(&node_->expr)) return c->value;
  return std::nullopt;
}

bool RandomField::is_zero() const {
  auto v = constant_value();
  return v && *v == 0.0;
}

namespace {

Polynomial shift_polynomial(const Polynomial& p, const Eigen::VectorXd& h) {
  const int n = p.dim();
  Polynomial out(n);
  for (const auto& [alpha, c] : p.coefficients()) {
    Polynomial term = Polynomial::constant(n, c);
    for (int i = 0; i < n; ++i) {
      const Polynomial factor = Polynomial::coordinate(n, i) - Polynomial::constant(n, h(i));
      for (int k = 0; k < alpha[i]; ++k) term = term * factor;
    }
    out += term;
  }
  return out;
}

}  // namespace

std::optional<Polynomial> RandomField::as_polynomial() const {
  const int n = dim();
  return std::visit(
      Overloaded{
          [&](const Node::Coordinate& c) -> std::optional<Polynomial> { return Polynomial::coordinate(n, c.axis); },
          [&](const Node::Constant& c) -> std::optional<Polynomial> { return Polynomial::constant(n, c.value); },
          [&](const Node::Hermite& h) -> std::optional<Polynomial> { return h.series.to_polynomial(); },
          [&](const Node::Poly& p) -> std::optional<Polynomial> { return p.poly; },
          [&](const Node::SquaredNorm&) -> std::optional<Polynomial> {
            Polynomial s(n);
            for (int i = 0; i < n; ++i) s += Polynomial::coordinate(n, i) * Polynomial::coordinate(n, i);
            return s;
          },
          [&](const Node::Affine& a) -> std::optional<Polynomial> {
            Polynomial s = Polynomial::constant(n, a.offset);
            for (const auto& [c, f] : a.terms) {
              auto q = f.as_polynomial();
              if (!q) return std::nullopt;
              s += c * *q;
            }
            return s;
          },
          [&](const Node::Product& p) -> std::optional<Polynomial> {
            auto l = p.lhs.as_polynomial();
            auto r = p.rhs.as_polynomial();
            if (!l || !r) return std::nullopt;
            return *l * *r;
          },
          [&](const Node::Compose&) -> std::optional<Polynomial> { return std::nullopt; },
          [&](const Node::Truncate&) -> std::optional<Polynomial> { return std::nullopt; },
          [&](const Node::Translate& t) -> std::optional<Polynomial> {
            auto q = t.inner.as_polynomial();
            if (!q) return std::nullopt;
            return shift_polynomial(*q, t.shift);
          },
      },
      node_->expr);
}

bool RandomField::differentiable() const {
  return std::visit(
      Overloaded{
          [](const Node::Affine& a) {
            return std::all_of(a.terms.begin(), a.terms.end(), [](const auto& t) { return t.second.differentiable(); });
          },
          [](const Node::Product& p) { return p.lhs.differentiable() && p.rhs.differentiable(); },
          [](const Node::Compose& c) { return activation_weakly_differentiable(c.g) && c.inner.differentiable(); },
          [](const Node::Truncate& t) { return t.inner.differentiable(); },
          [](const Node::Translate& t) { return t.inner.differentiable(); },
          [](const auto&) { return true; },
      },
      node_->expr);
}

namespace {

// G'(inner) as a field.
RandomField activation_derivative(Activation g, const RandomField& inner) {
  const int n = inner.dim();
  switch (g) {
    case Activation::Identity: return RandomField::constant(n, 1.0);
    case Activation::Relu: return RandomField::compose(Activation::Step, inner);
    case Activation::Abs: return RandomField::compose(Activation::Sign, inner);
    case Activation::Tanh: {
      const auto t = RandomField::compose(Activation::Tanh, inner);
      return RandomField::affine({{-1.0, t * t}}, 1.0);
    }
    case Activation::Softplus: return RandomField::compose(Activation::Sigmoid, inner);
    case Activation::Sigmoid: {
      const auto s = RandomField::compose(Activation::Sigmoid, inner);
      return s * RandomField::affine({{-1.0, s}}, 1.0);
    }
    case Activation::Exp: return RandomField::compose(Activation::Exp, inner);
    case Activation::Log: return RandomField::compose(Activation::Reciprocal, inner);
    case Activation::Sqrt:
      return 0.5 * RandomField::compose(Activation::Reciprocal, RandomField::compose(Activation::Sqrt, inner));
    case Activation::Reciprocal: {
      const auto r = RandomField::compose(Activation::Reciprocal, inner);
      return -(r * r);
    }
    case Activation::Step:
    case Activation::Sign: break;
  }
  throw DomainError("activation '" + std::string(activation_name(g)) + "' has no weak derivative");
}

}  // namespace

RandomField RandomField::partial(int axis) const {
  const int n = dim();
  if (axis < 0 || axis >= n) throw DimensionMismatch("partial: axis out of range");
  return std::visit(
      Overloaded{
          [&](const Node::Coordinate& c) { return constant(n, c.axis == axis ? 1.0 : 0.0); },
          [&](const Node::Constant&) { return constant(n, 0.0); },
          [&](const Node::Hermite& h) { return hermite(h.series.partial(axis)); },
          [&](const Node::Poly& p) { return polynomial(p.poly.partial(axis)); },
          [&](const Node::SquaredNorm&) { return 2.0 * coordinate(n, axis); },
          [&](const Node::Affine& a) {
            std::vector<std::pair<double, RandomField>> terms;
            for (const auto& [c, f] : a.terms) terms.emplace_back(c, f.partial(axis));
            return affine(std::move(terms));
          },
          [&](const Node::Product& p) { return p.lhs * p.rhs.partial(axis) + p.rhs * p.lhs.partial(axis); },
          [&](const Node::Compose& c) {
            const auto dinner = c.inner.partial(axis);
            if (dinner.is_zero()) return dinner;
            return activation_derivative(c.g, c.inner) * dinner;
          },
          [&](const Node::Truncate& t) { return truncate(t.inner.partial(axis), t.radius); },
          [&](const Node::Translate& t) { return translate(t.inner.partial(axis), t.shift); },
      },
      node_->expr);
}

std::vector<RandomField> RandomField::gradient() const {
  std::vector<RandomField> g;
  g.reserve(dim());
  for (int i = 0; i < dim(); ++i) g.push_back(partial(i));
  return g;
}

RandomField RandomField::laplacian() const {
  std::vector<std::pair<double, RandomField>> terms;
  for (int i = 0; i < dim(); ++i) terms.emplace_back(1.0, partial(i).partial(i));
  return affine(std::move(terms));
}

std::vector<Ball> RandomField::truncation_balls() const {
  std::vector<Ball> out;
  auto append = [&](const RandomField& f) {
    auto b = f.truncation_balls();
    out.insert(out.end(), b.begin(), b.end());
  };
  std::visit(Overloaded{
                 [&](const Node::Affine& a) {
                   for (const auto& [c, f] : a.terms) append(f);
                 },
                 [&](const Node::Product& p) {
                   append(p.lhs);
                   append(p.rhs);
                 },
                 [&](const Node::Compose& c) { append(c.inner); },
                 [&](const Node::Truncate& t) {
                   out.push_back(Ball{Eigen::VectorXd::Zero(dim()), t.radius});
                   append(t.inner);
                 },
                 [&](const Node::Translate& t) {
                   for (auto b : t.inner.truncation_balls()) {
                     b.center += t.shift;
                     out.push_back(std::move(b));
                   }
                 },
                 [](const auto&) {},
             },
             node_->expr);
  return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

using nlohmann::json;

json coefficient_table(const std::map<MultiIndex, double>& coeffs) {
  json terms = json::array();
  for (const auto& [alpha, c] : coeffs) terms.push_back({{"alpha", alpha}, {"c", c}});
  return terms;
}

std::map<MultiIndex, double> read_coefficients(const json& terms, int dim) {
  std::map<MultiIndex, double> out;
  for (const auto& t : terms) {
    auto alpha = t.at("alpha").get<MultiIndex>();
    if (static_cast<int>(alpha.size()) != dim) throw DimensionMismatch("multi-index length differs from field dimension");
    out[alpha] += t.at("c").get<double>();
  }
  return out;
}

json node_to_json(const RandomField& f) {
  return std::visit(
      Overloaded{
          [](const RandomField::Node::Coordinate& c) -> json { return {{"op", "coord"}, {"axis", c.axis}}; },
          [](const RandomField::Node::Constant& c) -> json { return {{"op", "const"}, {"value", c.value}}; },
          [](const RandomField::Node::Hermite& h) -> json {
            return {{"op", "hermite"}, {"terms", coefficient_table(h.series.coefficients())}};
          },
          [](const RandomField::Node::Poly& p) -> json {
            return {{"op", "poly"}, {"terms", coefficient_table(p.poly.coefficients())}};
          },
          [](const RandomField::Node::SquaredNorm&) -> json { return {{"op", "sqnorm"}}; },
          [](const RandomField::Node::Affine& a) -> json {
            json terms = json::array();
            for (const auto& [c, g] : a.terms) terms.push_back({{"c", c}, {"f", node_to_json(g)}});
            return {{"op", "affine"}, {"offset", a.offset}, {"terms", terms}};
          },
          [](const RandomField::Node::Product& p) -> json {
            return {{"op", "product"}, {"factors", {node_to_json(p.lhs), node_to_json(p.rhs)}}};
          },
          [](const RandomField::Node::Compose& c) -> json {
            return {{"op", "compose"}, {"g", std::string(activation_name(c.g))}, {"f", node_to_json(c.inner)}};
          },
          [](const RandomField::Node::Truncate& t) -> json {
            return {{"op", "truncate"}, {"radius", t.radius}, {"f", node_to_json(t.inner)}};
          },
          [](const RandomField::Node::Translate& t) -> json {
            return {{"op", "translate"},
                    {"h", std::vector<double>(t.shift.data(), t.shift.data() + t.shift.size())},
                    {"f", node_to_json(t.inner)}};
          },
      },
      f.node()->expr);
}

RandomField node_from_json(const json& j, int dim) {
  if (!j.is_object() || !j.contains("op")) throw std::invalid_argument("field expression: expected an object with \"op\"");
  const auto op = j.at("op").get<std::string>();
  if (op == "coord") return RandomField::coordinate(dim, j.at("axis").get<int>());
  if (op == "const") return RandomField::constant(dim, j.at("value").get<double>());
  if (op == "hermite") return RandomField::hermite(HermiteSeries(dim, read_coefficients(j.at("terms"), dim)));
  if (op == "poly") return RandomField::polynomial(Polynomial(dim, read_coefficients(j.at("terms"), dim)));
  if (op == "sqnorm") return RandomField::squared_norm(dim);
  if (op == "affine") {
    std::vector<std::pair<double, RandomField>> terms;
    for (const auto& t : j.at("terms")) terms.emplace_back(t.at("c").get<double>(), node_from_json(t.at("f"), dim));
    const double offset = j.value("offset", 0.0);
    if (terms.empty()) return RandomField::constant(dim, offset);
    return RandomField::affine(std::move(terms), offset);
  }
  if (op == "product") {
    const auto& fs = j.at("factors");
    if (!fs.is_array() || fs.empty()) throw std::invalid_argument("field expression: product needs factors");
    RandomField acc = node_from_json(fs.at(0), dim);
    for (std::size_t k = 1; k < fs.size(); ++k) acc = RandomField::product(acc, node_from_json(fs[k], dim));
    return acc;
  }
  if (op == "compose")
    return RandomField::compose(parse_activation(j.at("g").get<std::string>()), node_from_json(j.at("f"), dim));
  if (op == "truncate") return RandomField::truncate(node_from_json(j.at("f"), dim), j.at("radius").get<double>());
  if (op == "translate") {
    const auto h = j.at("h").get<std::vector<double>>();
    return RandomField::translate(node_from_json(j.at("f"), dim),
                                  Eigen::Map<const Eigen::VectorXd>(h.data(), static_cast<Eigen::Index>(h.size())));
  }
  throw std::invalid_argument("field expression: unknown op '" + op + "'");
}

}  // namespace

nlohmann::json RandomField::to_json() const { return {{"dim", dim()}, {"expr", node_to_json(*this)}}; }

RandomField RandomField::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("expr"))
    throw std::invalid_argument("field JSON: expected {\"dim\": n, \"expr\": ...}");
  return node_from_json(j.at("expr"), j.at("dim").get<int>());
}

// ---------------------------------------------------------------------------
// arithmetic

RandomField operator+(const RandomField& a, const RandomField& b) {
  require_same_dim(a, b);
  return RandomField::affine({{1.0, a}, {1.0, b}});
}

RandomField operator-(const RandomField& a, const RandomField& b) {
  require_same_dim(a, b);
  return RandomField::affine({{1.0, a}, {-1.0, b}});
}

RandomField operator-(const RandomField& a) { return RandomField::affine({{-1.0, a}}); }

RandomField operator*(const RandomField& a, const RandomField& b) { return RandomField::product(a, b); }

RandomField operator*(double s, const RandomField& f) { return RandomField::affine({{s, f}}); }

RandomField operator+(const RandomField& f, double c) { return RandomField::affine({{1.0, f}}, c); }

RandomField operator-(const RandomField& f, double c) { return RandomField::affine({{1.0, f}}, -c); }

RandomField field_min(const RandomField& f, const RandomField& g) {
  return 0.5 * (f + g - RandomField::compose(Activation::Abs, f - g));
}

RandomField field_max(const RandomField& f, const RandomField& g) {
  return 0.5 * (f + g + RandomField::compose(Activation::Abs, f - g));
}

RandomField bump(const Eigen::VectorXd& center, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("bump scale must be > 0");
  const int n = static_cast<int>(center.size());
  const Polynomial one_minus = Polynomial::constant(n, 1.0) - (1.0 / (scale * scale)) * [&] {
    Polynomial s(n);
    for (int i = 0; i < n; ++i) s += Polynomial::coordinate(n, i) * Polynomial::coordinate(n, i);
    return s;
  }();
  const auto core = RandomField::polynomial(one_minus * one_minus * one_minus);
  return RandomField::translate(RandomField::truncate(core, scale), center);
}

// ---------------------------------------------------------------------------
// presets

namespace {

std::optional<double> parse_number(std::string_view s) {
  if (s.empty()) return std::nullopt;
  const std::string str(s);
  char* end = nullptr;
  const double v = std::strtod(str.c_str(), &end);
  if (end != str.c_str() + str.size()) return std::nullopt;
  return v;
}

std::optional<int> parse_int(std::string_view s) {
  if (s.empty()) return std::nullopt;
  int v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = 10 * v + (c - '0');
    if (v > 100000) return std::nullopt;
  }
  return v;
}

// "x" → 0, "x3" → 2
std::optional<int> parse_variable(std::string_view s, int dim) {
  if (s.empty() || s.front() != 'x') return std::nullopt;
  if (s.size() == 1) return 0;
  auto k = parse_int(s.substr(1));
  if (!k) return std::nullopt;
  if (*k < 1 || *k > dim) throw DimensionMismatch("variable '" + std::string(s) + "' exceeds dimension " + std::to_string(dim));
  return *k - 1;
}

[[noreturn]] void unknown_preset(std::string_view spec) {
  throw std::invalid_argument("unknown field preset '" + std::string(spec) + "'");
}

RandomField parse_preset(std::string_view s, int dim) {
  if (auto v = parse_number(s)) return RandomField::constant(dim, *v);
  if (auto axis = parse_variable(s, dim)) return RandomField::coordinate(dim, *axis);
  if (s == "sqnorm" || s == "|x|^2") return RandomField::squared_norm(dim);

  if (s.size() > 2 && s.front() == '|' && s.back() == '|')
    return RandomField::compose(Activation::Abs, parse_preset(s.substr(1, s.size() - 2), dim));

  if (const auto caret = s.find('^'); caret != std::string_view::npos && s.front() == 'x') {
    auto axis = parse_variable(s.substr(0, caret), dim);
    auto k = parse_int(s.substr(caret + 1));
    if (!axis || !k) unknown_preset(s);
    MultiIndex alpha(dim, 0);
    alpha[*axis] = *k;
    return RandomField::polynomial(Polynomial(dim, {{alpha, 1.0}}));
  }

  if (s.front() == 'H') {
    std::string_view body = s.substr(1);
    double scale = 1.0;
    if (const auto slash = body.find('/'); slash != std::string_view::npos) {
      auto c = parse_number(body.substr(slash + 1));
      if (!c || *c == 0.0) unknown_preset(s);
      scale = 1.0 / *c;
      body = body.substr(0, slash);
    }
    MultiIndex alpha(dim, 0);
    if (!body.empty() && body.front() == '(' && body.back() == ')') {
      body = body.substr(1, body.size() - 2);
      std::size_t i = 0;
      int axis = 0;
      while (i <= body.size()) {
        const auto comma = std::min(body.find(',', i), body.size());
        auto k = parse_int(body.substr(i, comma - i));
        if (!k) unknown_preset(s);
        if (axis >= dim) throw DimensionMismatch("Hermite index '" + std::string(s) + "' exceeds dimension");
        alpha[axis++] = *k;
        i = comma + 1;
      }
    } else {
      auto k = parse_int(body);
      if (!k) unknown_preset(s);
      alpha[0] = *k;
    }
    return RandomField::hermite(HermiteSeries::basis(alpha, scale));
  }

  if (s.rfind("tilt:", 0) == 0) {
    auto a = parse_number(s.substr(5));
    if (!a) unknown_preset(s);
    return *a * RandomField::coordinate(dim, 0);
  }

  if (s.rfind("trunc:", 0) == 0) {
    const auto rest = s.substr(6);
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) unknown_preset(s);
    auto radius = parse_number(rest.substr(0, colon));
    if (!radius) unknown_preset(s);
    return RandomField::truncate(parse_preset(rest.substr(colon + 1), dim), *radius);
  }

  if (s.rfind("bump:", 0) == 0) {
    const auto rest = s.substr(5);
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) unknown_preset(s);
    auto c = parse_number(rest.substr(0, colon));
    auto scale = parse_number(rest.substr(colon + 1));
    if (!c || !scale) unknown_preset(s);
    Eigen::VectorXd center = Eigen::VectorXd::Zero(dim);
    center(0) = *c;
    return bump(center, *scale);
  }

  // a*<preset>
  if (const auto star = s.find('*'); star != std::string_view::npos) {
    if (auto a = parse_number(s.substr(0, star))) return *a * parse_preset(s.substr(star + 1), dim);
  }

  // g(<preset>)
  if (const auto open = s.find('('); open != std::string_view::npos && s.back() == ')') {
    Activation g;
    try {
      g = parse_activation(s.substr(0, open));
    } catch (const std::invalid_argument&) {
      unknown_preset(s);
    }
    return RandomField::compose(g, parse_preset(s.substr(open + 1, s.size() - open - 2), dim));
  }

  unknown_preset(s);
}

}  // namespace

RandomField parse_field(std::string_view spec, int dim) {
  while (!spec.empty() && std::isspace(static_cast<unsigned char>(spec.front()))) spec.remove_prefix(1);
  while (!spec.empty() && std::isspace(static_cast<unsigned char>(spec.back()))) spec.remove_suffix(1);
  if (spec.empty()) throw std::invalid_argument("empty field specification");
  if (dim < 1) throw std::invalid_argument("field dimension must be ≥ 1");
  if (spec.front() == '{') {
    json j;
    try {
      j = json::parse(spec);
    } catch (const json::parse_error& e) {
      throw std::invalid_argument(std::string("malformed field JSON: ") + e.what());
    }
    if (j.contains("dim")) {
      if (j.at("dim").get<int>() != dim)
        throw DimensionMismatch("field JSON has dim " + std::to_string(j.at("dim").get<int>()) + " but " +
                                std::to_string(dim) + " was requested");
      return RandomField::from_json(j);
    }
    return node_from_json(j, dim);
  }
  return parse_preset(spec, dim);
}

std::vector<std::string> field_preset_names() {
  return {"<number>", "x",       "x1..x9",    "x^k",       "|x|",         "|x|^2",    "sqnorm",
          "Hk",       "Hk/c",    "H(a,b,..)", "exp(x^2)",  "tanh(x)",     "relu(x)",  "softplus(x)",
          "a*<f>",    "tilt:a",  "trunc:N:<f>", "bump:c:s", "<g>(<f>)"};
}

}  // namespace orlicz
