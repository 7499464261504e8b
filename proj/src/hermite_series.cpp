#include "orlicz/hermite_series.hpp"

#include "orlicz/estimate.hpp"

#include <algorithm>
#include <cmath>

namespace orlicz {

Eigen::VectorXd hermite_values(double t, int max_degree) {
  Eigen::VectorXd h(max_degree + 1);
  h(0) = 1.0;
  if (max_degree >= 1) h(1) = t;
  for (int k = 1; k < max_degree; ++k) h(k + 1) = t * h(k) - k * h(k - 1);
  return h;
}

HermiteSeries::HermiteSeries(int dim, Coefficients coeffs) : dim_(dim), coeffs_(std::move(coeffs)) {
  if (dim < 1) throw std::invalid_argument("HermiteSeries: dim must be ≥ 1");
  for (const auto& [alpha, c] : coeffs_) {
    if (static_cast<int>(alpha.size()) != dim) throw DimensionMismatch("HermiteSeries: multi-index length != dim");
    for (int a : alpha)
      if (a < 0) throw std::invalid_argument("HermiteSeries: negative index");
  }
  prune();
}

HermiteSeries HermiteSeries::basis(const MultiIndex& alpha, double scale) {
  return HermiteSeries(static_cast<int>(alpha.size()), {{alpha, scale}});
}

double HermiteSeries::coefficient(const MultiIndex& alpha) const {
  auto it = coeffs_.find(alpha);
  return it == coeffs_.end() ? 0.0 : it->second;
}

int HermiteSeries::degree() const {
  int d = 0;
  for (const auto& [alpha, c] : coeffs_) d = std::max(d, total_degree(alpha));
  return d;
}

double HermiteSeries::operator()(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) throw DimensionMismatch("HermiteSeries: point dimension mismatch");
  if (coeffs_.empty()) return 0.0;
  std::vector<int> max_deg(dim_, 0);
  for (const auto& [alpha, c] : coeffs_)
    for (int i = 0; i < dim_; ++i) max_deg[i] = std::max(max_deg[i], alpha[i]);
  std::vector<Eigen::VectorXd> table(dim_);
  for (int i = 0; i < dim_; ++i) table[i] = hermite_values(x(i), max_deg[i]);
  double s = 0.0;
  for (const auto& [alpha, c] : coeffs_) {
    double term = c;
    for (int i = 0; i < dim_; ++i) term *= table[i](alpha[i]);
    s += term;
  }
  return s;
}

HermiteSeries HermiteSeries::partial(int axis) const {
  if (axis < 0 || axis >= dim_) throw std::out_of_range("HermiteSeries::partial: bad axis");
  Coefficients out;
  for (const auto& [alpha, c] : coeffs_) {
    if (alpha[axis] == 0) continue;
    MultiIndex beta = alpha;
    beta[axis] -= 1;
    out[beta] += c * alpha[axis];
  }
  return HermiteSeries(dim_, std::move(out));
}

HermiteSeries HermiteSeries::divergence(int axis) const {
  if (axis < 0 || axis >= dim_) throw std::out_of_range("HermiteSeries::divergence: bad axis");
  Coefficients out;
  for (const auto& [alpha, c] : coeffs_) {
    MultiIndex beta = alpha;
    beta[axis] += 1;
    out[beta] += c;
  }
  return HermiteSeries(dim_, std::move(out));
}

Polynomial HermiteSeries::to_polynomial() const {
  // univariate monomial coefficients of He_k by the three-term recurrence
  int max_deg = degree();
  std::vector<std::vector<double>> he(max_deg + 1);
  he[0] = {1.0};
  if (max_deg >= 1) he[1] = {0.0, 1.0};
  for (int k = 1; k < max_deg; ++k) {
    std::vector<double> next(k + 2, 0.0);
    for (int j = 0; j <= k; ++j) next[j + 1] += he[k][j];
    for (int j = 0; j <= k - 1; ++j) next[j] -= k * he[k - 1][j];
    he[k + 1] = std::move(next);
  }
  Polynomial total(dim_);
  for (const auto& [alpha, c] : coeffs_) {
    Polynomial term = Polynomial::constant(dim_, c);
    for (int i = 0; i < dim_; ++i) {
      Polynomial::Coefficients uni;
      for (int j = 0; j <= alpha[i]; ++j) {
        if (he[alpha[i]][j] == 0.0) continue;
        MultiIndex e(dim_, 0);
        e[i] = j;
        uni[e] = he[alpha[i]][j];
      }
      term = term * Polynomial(dim_, std::move(uni));
    }
    total += term;
  }
  return total;
}

HermiteSeries& HermiteSeries::operator+=(const HermiteSeries& other) {
  if (other.dim_ != dim_) throw DimensionMismatch("HermiteSeries: dimension mismatch");
  for (const auto& [alpha, c] : other.coeffs_) coeffs_[alpha] += c;
  prune();
  return *this;
}

HermiteSeries operator*(double s, HermiteSeries h) {
  for (auto& [alpha, c] : h.coeffs_) c *= s;
  h.prune();
  return h;
}

double HermiteSeries::distance(const HermiteSeries& other) const {
  double d = 0.0;
  for (const auto& [alpha, c] : coeffs_) d = std::max(d, std::abs(c - other.coefficient(alpha)));
  for (const auto& [alpha, c] : other.coeffs_) d = std::max(d, std::abs(c - coefficient(alpha)));
  return d;
}

void HermiteSeries::prune() {
  std::erase_if(coeffs_, [](const auto& kv) { return kv.second == 0.0; });
}

}  // namespace orlicz
