#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <vector>

namespace orlicz::detail {

struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;
  double abs_value = 0.0;  // ∫|g|, for relative tolerances
  bool finite = true;      // false if the integrand returned inf/nan
  bool converged = true;
};

struct Gk15Segment {
  double a, b, value, error, abs_value;
  bool operator<(const Gk15Segment& o) const { return error < o.error; }
};

// 15-point Kronrod extension of the 7-point Gauss rule.
template <typename F>
Gk15Segment gauss_kronrod_15(F&& g, double a, double b, bool& finite) {
  static constexpr std::array<double, 8> xk = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr std::array<double, 8> wk = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr std::array<double, 4> wg = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = g(center);
  double kronrod = wk[7] * fc;
  double gauss = wg[3] * fc;
  double absk = wk[7] * std::abs(fc);
  if (!std::isfinite(fc)) finite = false;
  std::array<double, 7> f1s, f2s;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * xk[j];
    const double f1 = g(center - dx);
    const double f2 = g(center + dx);
    f1s[j] = f1;
    f2s[j] = f2;
    if (!std::isfinite(f1) || !std::isfinite(f2)) finite = false;
    kronrod += wk[j] * (f1 + f2);
    absk += wk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += wg[j / 2] * (f1 + f2);
  }
  // QUADPACK error estimate with its roundoff floor
  const double mean = 0.5 * kronrod;
  double asc = wk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) asc += wk[j] * (std::abs(f1s[j] - mean) + std::abs(f2s[j] - mean));
  const double hh = std::abs(half);
  double error = std::abs((kronrod - gauss) * half);
  const double resasc = asc * hh;
  if (resasc != 0.0 && error != 0.0) error = resasc * std::min(1.0, std::pow(200.0 * error / resasc, 1.5));
  const double resabs = absk * hh;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) error = std::max(50.0 * eps * resabs, error);
  Gk15Segment s;
  s.a = a;
  s.b = b;
  s.value = kronrod * half;
  s.abs_value = resabs;
  s.error = error;
  return s;
}

/// Globally adaptive Gauss-Kronrod over the partition given by `knots`
/// (sorted, at least two entries). Subdivides the worst segment until the
/// summed error estimate is ≤ max(abs_tol, rel_tol·∫|g|).
template <typename F>
AdaptiveResult adaptive_integrate(F&& g, std::span<const double> knots, double abs_tol, double rel_tol,
                                  int max_segments = 2000) {
  AdaptiveResult out;
  std::priority_queue<Gk15Segment> heap;
  double total = 0.0, err = 0.0, absv = 0.0;
  bool finite = true;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    if (!(knots[i + 1] > knots[i])) continue;
    auto s = gauss_kronrod_15(g, knots[i], knots[i + 1], finite);
    total += s.value;
    err += s.error;
    absv += s.abs_value;
    heap.push(s);
  }
  if (!finite) {
    out.finite = false;
    return out;
  }
  int segments = static_cast<int>(heap.size());
  while (!heap.empty() && err > std::max(abs_tol, rel_tol * absv)) {
    if (segments >= max_segments) {
      out.converged = false;
      break;
    }
    const Gk15Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      out.converged = false;
      break;
    }
    heap.pop();
    auto left = gauss_kronrod_15(g, worst.a, mid, finite);
    auto right = gauss_kronrod_15(g, mid, worst.b, finite);
    if (!finite) {
      out.finite = false;
      return out;
    }
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    absv += left.abs_value + right.abs_value - worst.abs_value;
    heap.push(left);
    heap.push(right);
    ++segments;
  }
  // Re-sum to shed accumulated cancellation from incremental updates.
  total = 0.0;
  err = 0.0;
  absv = 0.0;
  std::vector<Gk15Segment> all;
  all.reserve(heap.size());
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Gk15Segment& l, const Gk15Segment& r) { return l.a < r.a; });
  for (const auto& s : all) {
    total += s.value;
    err += s.error;
    absv += s.abs_value;
  }
  out.value = total;
  out.error = err;
  out.abs_value = absv;
  return out;
}

}  // namespace orlicz::detail
