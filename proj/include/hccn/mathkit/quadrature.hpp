#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature and fixed Gauss-Legendre
// rules.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <queue>
#include <sstream>
#include <type_traits>
#include <vector>

#include "hccn/errors.hpp"

namespace hccn::mathkit {

struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  int max_panels = 2000;
  // When set, the integrand is assumed to behave like (x - a)^p near the lower
  // endpoint (p > -1) and the power substitution u = (x - a)^(1 + p) is applied.
  std::optional<double> singular_exponent;
};

template <class T>
struct QuadResult {
  T value{};
  double abs_error = 0;
  int panels = 0;
  bool converged = false;
};

namespace detail {

// QUADPACK qk15 abscissae and weights.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct Panel {
  double a, b;
  T value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class T, class F>
Panel<T> gk15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(center);
  T resk = fc * kWgk[7];
  T resg = fc * kWg[3];
  double resabs = std::abs(fc) * kWgk[7];
  std::array<T, 7> f1{}, f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    resk += kWgk[j] * (f1[j] + f2[j]);
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1[j] + f2[j]);
  }
  const T mean = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  resasc *= std::abs(half);
  resabs *= std::abs(half);
  double err = std::abs((resk - resg) * half);
  if (resasc != 0 && err != 0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double kEps = 2.220446049250313e-16;
  if (resabs > 1e-290 / (50 * kEps)) err = std::max(50 * kEps * resabs, err);
  return {a, b, resk * half, err};
}

template <class F, class T = std::invoke_result_t<F&, double>>
QuadResult<T> adaptive(F& f, double a, double b, const QuadOptions& opt) {
  std::priority_queue<Panel<T>> heap;
  Panel<T> first = gk15<T>(f, a, b);
  T total = first.value;
  double total_err = first.error;
  heap.push(first);
  int panels = 1;
  const double min_width = 1e-14 * std::abs(b - a);
  auto tolerance = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };
  while (total_err > tolerance() && panels < opt.max_panels) {
    Panel<T> worst = heap.top();
    if (std::abs(worst.b - worst.a) < min_width) break;
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Panel<T> left = gk15<T>(f, worst.a, mid);
    Panel<T> right = gk15<T>(f, mid, worst.b);
    ++panels;
    heap.push(left);
    heap.push(right);
    // Re-sum from scratch every few steps to stop drift in the running totals.
    if (panels % 64 == 0) {
      auto copy = heap;
      total = T{};
      total_err = 0;
      while (!copy.empty()) {
        total += copy.top().value;
        total_err += copy.top().error;
        copy.pop();
      }
    } else {
      total += left.value + right.value - worst.value;
      total_err += left.error + right.error - worst.error;
    }
  }
  // Final totals summed in a deterministic order (by panel position).
  std::vector<Panel<T>> all;
  all.reserve(heap.size());
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const auto& l, const auto& r) { return l.a < r.a; });
  T sum{};
  double err = 0;
  for (const auto& p : all) {
    sum += p.value;
    err += p.error;
  }
  QuadResult<T> r;
  r.value = sum;
  r.abs_error = err;
  r.panels = panels;
  r.converged = err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(sum)) ||
                err <= 100 * 2.220446049250313e-16 * std::abs(sum);
  return r;
}

}  // namespace detail

/// Integrates f over [a, b] and reports the achieved error. Never throws on
/// non-convergence; check `converged`.
template <class F>
auto integrate_detailed(F&& f, double a, double b, const QuadOptions& opt = {}) {
  using T = std::invoke_result_t<F&, double>;
  if (!(a < b)) {
    if (a == b) return QuadResult<T>{T{}, 0.0, 0, true};
    throw std::domain_error("integrate: require a < b");
  }
  if (opt.singular_exponent) {
    const double p = *opt.singular_exponent;
    if (!(p > -1)) throw std::domain_error("integrate: singular exponent must exceed -1");
    const double q = 1.0 + p;
    const double width = b - a;
    auto g = [&](double u) -> T {
      // x = a + width * u^(1/q), dx = width/q * u^(1/q - 1) du
      const double x = a + width * std::pow(u, 1.0 / q);
      return f(x) * (width / q * std::pow(u, 1.0 / q - 1.0));
    };
    return detail::adaptive(g, 0.0, 1.0, opt);
  }
  return detail::adaptive(f, a, b, opt);
}

/// Adaptive quadrature to absolute tolerance `tol`; throws QuadratureError
/// carrying the best estimate when the panel budget is exhausted.
template <class F>
auto integrate(F&& f, double a, double b, double tol, QuadOptions opt = {}) {
  opt.abs_tol = tol;
  auto r = integrate_detailed(f, a, b, opt);
  if (!r.converged) {
    std::ostringstream msg;
    msg << "quadrature on [" << a << ", " << b << "] did not converge: error " << r.abs_error
        << " after " << r.panels << " panels";
    throw QuadratureError(msg.str(), std::real(r.value), r.abs_error);
  }
  return r.value;
}

/// Same as integrate() but with a relative tolerance and an absolute floor.
template <class F>
auto integrate_rel(F&& f, double a, double b, double rel_tol, double abs_floor, QuadOptions opt = {}) {
  opt.rel_tol = rel_tol;
  return integrate(f, a, b, abs_floor, opt);
}

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [a, b] (Newton iteration on P_n).
inline GaussRule gauss_legendre(int n, double a, double b) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1 - x * x) * dp * dp);
    rule.nodes[i] = mid - half * x;
    rule.nodes[n - 1 - i] = mid + half * x;
    rule.weights[i] = rule.weights[n - 1 - i] = w * half;
  }
  return rule;
}

}  // namespace hccn::mathkit
