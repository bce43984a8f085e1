#pragma once

// Header-only adaptive Gauss-Kronrod integration, generic over the value
// type (double or std::complex<double>) so that inner loops inline.

#include <algorithm>
#include <cmath>
#include <complex>
#include <queue>
#include <string>
#include <vector>

#include "synchrad/numerics.hpp"

namespace synchrad::numerics {

namespace gk21 {
inline constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss 10-point weights for kXgk[1], kXgk[3], ..., kXgk[9].
inline constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};
}  // namespace gk21

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

template <class T>
struct Panel {
  double a;
  double b;
  T value;
  double error;
};

/// One 21-point Kronrod panel with the embedded 10-point Gauss estimate.
template <class T, class F>
Panel<T> gk21_panel(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(center);
  T kronrod = fc * gk21::kWgk[10];
  T gauss = T{};
  for (int j = 0; j < 10; ++j) {
    const double dx = half * gk21::kXgk[j];
    const T sum = f(center - dx) + f(center + dx);
    kronrod += sum * gk21::kWgk[j];
    if (j % 2 == 1) gauss += sum * gk21::kWg[j / 2];
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, magnitude(kronrod - gauss)};
}

template <class T>
struct Integration {
  T value{};
  double error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Globally adaptive bisection over the given breakpoints (sorted, at least
/// two). The panel with the largest error estimate is split until the summed
/// error meets the tolerance or the subdivision budget is spent.
template <class T, class F>
Integration<T> integrate_panels(F&& f, const std::vector<double>& breaks, const Tolerance& tol,
                                int max_subdivisions = kDefaultMaxSubdivisions) {
  auto cmp = [](const Panel<T>& l, const Panel<T>& r) { return l.error < r.error; };
  std::priority_queue<Panel<T>, std::vector<Panel<T>>, decltype(cmp)> heap(cmp);
  Integration<T> out;
  T total{};
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    auto p = gk21_panel<T>(f, breaks[i], breaks[i + 1]);
    out.evaluations += 21;
    total += p.value;
    err += p.error;
    heap.push(p);
  }
  int splits = 0;
  while (!heap.empty()) {
    if (err <= tol.bound(magnitude(total))) {
      out.converged = true;
      break;
    }
    if (splits >= max_subdivisions) break;
    const Panel<T> worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Interval cannot be split further in floating point.
      break;
    }
    heap.pop();
    auto left = gk21_panel<T>(f, worst.a, mid);
    auto right = gk21_panel<T>(f, mid, worst.b);
    out.evaluations += 42;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++splits;
  }
  if (heap.empty()) out.converged = true;
  // Re-accumulate to shed drift from incremental updates.
  T fresh{};
  double fresh_err = 0.0;
  while (!heap.empty()) {
    fresh += heap.top().value;
    fresh_err += heap.top().error;
    heap.pop();
  }
  out.value = fresh;
  out.error = std::max(fresh_err, 0.0);
  if (!out.converged) out.converged = out.error <= tol.bound(magnitude(out.value));
  return out;
}

template <class T, class F>
Integration<T> integrate(F&& f, double a, double b, const Tolerance& tol,
                         int max_subdivisions = kDefaultMaxSubdivisions) {
  return integrate_panels<T>(std::forward<F>(f), std::vector<double>{a, b}, tol, max_subdivisions);
}

/// Breakpoints a, a + w, a + 2w, a + 4w, ... clipped at b. Suited to
/// integrands concentrated near a with scale w.
inline std::vector<double> geometric_breaks(double a, double b, double w) {
  std::vector<double> br{a};
  double step = w;
  while (a + step < b) {
    br.push_back(a + step);
    step *= 2.0;
  }
  br.push_back(b);
  return br;
}

/// Breakpoints splitting [a, b] into n equal panels.
inline std::vector<double> uniform_breaks(double a, double b, int n) {
  std::vector<double> br;
  br.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) br.push_back(a + (b - a) * i / n);
  br.back() = b;
  return br;
}

/// Merge two sorted breakpoint lists.
inline std::vector<double> merge_breaks(std::vector<double> x, const std::vector<double>& y) {
  x.insert(x.end(), y.begin(), y.end());
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  return x;
}

}  // namespace synchrad::numerics
