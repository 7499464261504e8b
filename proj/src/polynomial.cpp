#include "orlicz/polynomial.hpp"

#include "orlicz/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace orlicz {

int total_degree(const MultiIndex& alpha) { return std::accumulate(alpha.begin(), alpha.end(), 0); }

double multi_factorial(const MultiIndex& alpha) {
  double f = 1.0;
  for (int a : alpha)
    for (int k = 2; k <= a; ++k) f *= k;
  return f;
}

std::vector<MultiIndex> multi_indices_up_to(int dim, int degree) {
  std::vector<MultiIndex> out;
  for (int d = 0; d <= degree; ++d) {
    // compositions of d into dim nonnegative parts, lexicographically descending on the first axis
    MultiIndex alpha(dim, 0);
    std::vector<MultiIndex> level;
    auto rec = [&](auto&& self, int axis, int remaining) -> void {
      if (axis == dim - 1) {
        alpha[axis] = remaining;
        level.push_back(alpha);
        return;
      }
      for (int k = remaining; k >= 0; --k) {
        alpha[axis] = k;
        self(self, axis + 1, remaining - k);
      }
    };
    rec(rec, 0, d);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

Polynomial::Polynomial(int dim, Coefficients coeffs) : dim_(dim), coeffs_(std::move(coeffs)) {
  if (dim < 1) throw std::invalid_argument("Polynomial: dim must be ≥ 1");
  for (const auto& [alpha, c] : coeffs_) {
    if (static_cast<int>(alpha.size()) != dim) throw DimensionMismatch("Polynomial: multi-index length != dim");
    for (int a : alpha)
      if (a < 0) throw std::invalid_argument("Polynomial: negative exponent");
  }
  prune();
}

Polynomial Polynomial::constant(int dim, double c) { return Polynomial(dim, {{MultiIndex(dim, 0), c}}); }

Polynomial Polynomial::coordinate(int dim, int axis) {
  MultiIndex alpha(dim, 0);
  alpha.at(axis) = 1;
  return Polynomial(dim, {{alpha, 1.0}});
}

double Polynomial::coefficient(const MultiIndex& alpha) const {
  auto it = coeffs_.find(alpha);
  return it == coeffs_.end() ? 0.0 : it->second;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [alpha, c] : coeffs_) d = std::max(d, total_degree(alpha));
  return d;
}

double Polynomial::operator()(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) throw DimensionMismatch("Polynomial: point dimension mismatch");
  double s = 0.0;
  for (const auto& [alpha, c] : coeffs_) {
    double m = c;
    for (int i = 0; i < dim_; ++i)
      for (int k = 0; k < alpha[i]; ++k) m *= x(i);
    s += m;
  }
  return s;
}

Polynomial Polynomial::partial(int axis) const {
  Coefficients out;
  for (const auto& [alpha, c] : coeffs_) {
    if (alpha.at(axis) == 0) continue;
    MultiIndex beta = alpha;
    beta[axis] -= 1;
    out[beta] += c * alpha[axis];
  }
  return Polynomial(dim_, std::move(out));
}

Polynomial Polynomial::divergence(int axis) const {
  Coefficients shifted;
  for (const auto& [alpha, c] : coeffs_) {
    MultiIndex beta = alpha;
    beta.at(axis) += 1;
    shifted[beta] += c;
  }
  return Polynomial(dim_, std::move(shifted)) - partial(axis);
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (other.dim_ != dim_) throw DimensionMismatch("Polynomial: dimension mismatch");
  for (const auto& [alpha, c] : other.coeffs_) coeffs_[alpha] += c;
  prune();
  return *this;
}

Polynomial operator*(double s, const Polynomial& p) {
  Polynomial::Coefficients out;
  for (const auto& [alpha, c] : p.coeffs_) out[alpha] = s * c;
  return Polynomial(p.dim_, std::move(out));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.dim_ != b.dim_) throw DimensionMismatch("Polynomial: dimension mismatch");
  Polynomial::Coefficients out;
  for (const auto& [alpha, ca] : a.coeffs_)
    for (const auto& [beta, cb] : b.coeffs_) {
      MultiIndex g(a.dim_);
      for (int i = 0; i < a.dim_; ++i) g[i] = alpha[i] + beta[i];
      out[g] += ca * cb;
    }
  return Polynomial(a.dim_, std::move(out));
}

double Polynomial::distance(const Polynomial& other) const {
  double d = 0.0;
  for (const auto& [alpha, c] : coeffs_) d = std::max(d, std::abs(c - other.coefficient(alpha)));
  for (const auto& [alpha, c] : other.coeffs_) d = std::max(d, std::abs(c - coefficient(alpha)));
  return d;
}

void Polynomial::prune() {
  std::erase_if(coeffs_, [](const auto& kv) { return kv.second == 0.0; });
}

}  // namespace orlicz
