#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "synchrad/quadrature.hpp"

namespace synchrad::numerics {

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Tail sum_{k>n} a_k for terms modelled as a_k ~ k^-p exp(-c k), fitted to
// the last three terms. Covers geometric (p = 0), power-law (c = 0) and the
// mixed case. Returns +inf when the fit is not summable.
double model_tail(int n, double a2, double a1, double a0, double& remainder) {
  const double l0 = std::log(a1 / a0);  // at k = n
  const double l1 = std::log(a2 / a1);  // at k = n - 1
  const double L0 = std::log(n / (n - 1.0));
  const double L1 = std::log((n - 1.0) / (n - 2.0));
  const double p = (l1 - l0) / (L1 - L0);
  double c = l0 - p * L0;
  if (c < 0.0 && -c < 1e-9 * l0) c = 0.0;
  if (c < 0.0 || (c == 0.0 && p <= 1.0)) return kInf;
  // Model f(k) = a0 (n/k)^p exp(-c (k - n)); tail by Euler-Maclaurin.
  // Integral in y = ln(k/n): n a0 exp(y - p y - c n (e^y - 1)).
  const double cn = c * n;
  auto g = [&](double y) {
    const double e = (1.0 - p) * y - cn * std::expm1(y);
    return e < -700.0 ? 0.0 : std::exp(e);
  };
  // Upper limit where the exponent has fallen by about 60.
  double ymax = 700.0;
  if (p > 1.0) ymax = std::min(ymax, 60.0 / (p - 1.0));
  if (cn > 0.0) ymax = std::min(ymax, std::log1p((60.0 + 700.0 * std::max(0.0, 1.0 - p)) / cn));
  ymax = std::max(ymax, 1e-6);
  while (g(ymax) > 1e-30 && ymax < 700.0) ymax = std::min(700.0, 2.0 * ymax);
  const double scale = cn > 1.0 ? 1.0 / cn : 1.0;
  const auto r = integrate_panels<double>(g, geometric_breaks(0.0, ymax, std::min(scale, ymax / 2.0)),
                                         Tolerance{1e-12, 0.0}, 200);
  const double integral = n * a0 * r.value;
  // - f(n)/2 - f'(n)/12 + f'''(n)/720, with h = p/k + c, f' = -h f and
  // f''' = -f (h^3 + 3 h p/k^2 + 2 p/k^3).
  const double h = p / n + c;
  const double d3 = -a0 * (h * h * h + 3.0 * h * p / (n * double(n)) + 2.0 * p / (double(n) * n * n));
  remainder = std::abs(d3) / 720.0;
  return integral - 0.5 * a0 + a0 * h / 12.0 + d3 / 720.0;
}

}  // namespace

SeriesResult harmonic_sum_partial(const std::function<double(int)>& term, const Tolerance& tol,
                                  int n_max_cap, int min_terms, double max_tail_fraction,
                                  const std::function<double(int)>& bound) {
  tol.validate();
  if (n_max_cap < 1) throw DomainError("harmonic_sum: cap must be at least 1");
  min_terms = std::max(min_terms, 4);
  CompensatedSum sum;
  std::array<double, 3> last{0.0, 0.0, 0.0};  // a_{n-2}, a_{n-1}, a_n
  double prev_total = std::numeric_limits<double>::quiet_NaN();
  int settled = 0;
  SeriesResult out;
  std::vector<double> bounds;  // bound(k) for k = 1.., filled on demand
  auto bound_at = [&](int k) {
    while (static_cast<int>(bounds.size()) < k) bounds.push_back(std::abs(bound(static_cast<int>(bounds.size()) + 1)));
    return bounds[k - 1];
  };
  for (int n = 1; n <= n_max_cap; ++n) {
    const double a = term(n);
    if (!std::isfinite(a)) throw DomainError("harmonic_sum: non-finite term");
    sum.add(a);
    last = {last[1], last[2], a};
    out.terms = n;
    out.partial_sum = sum.value();
    if (n < min_terms) continue;
    double tail = kInf;
    double remainder = 0.0;
    if (last[0] == 0.0 && last[1] == 0.0 && last[2] == 0.0) {
      tail = 0.0;
    } else {
      const bool same_sign = (last[0] > 0 && last[1] > 0 && last[2] > 0) ||
                             (last[0] < 0 && last[1] < 0 && last[2] < 0);
      const bool decreasing = std::abs(last[2]) < std::abs(last[1]) && std::abs(last[1]) < std::abs(last[0]);
      if (same_sign && decreasing) {
        const double s = last[2] > 0 ? 1.0 : -1.0;
        tail = s * model_tail(n, std::abs(last[0]), std::abs(last[1]), std::abs(last[2]), remainder);
      }
    }
    if (!std::isfinite(tail) && bound) {
      // Terms that do not follow the model: take the tail as 0 and its
      // magnitude bound from the dominating sequence.
      const double b0 = bound_at(n - 2);
      const double b1 = bound_at(n - 1);
      const double b2 = bound_at(n);
      if (b2 == 0.0 && b1 == 0.0 && b0 == 0.0) {
        tail = 0.0;
      } else if (b2 < b1 && b1 < b0) {
        double rem = 0.0;
        const double tb = model_tail(n, b0, b1, b2, rem);
        if (std::isfinite(tb)) {
          tail = 0.0;
          remainder = tb + rem;
        }
      }
    }
    if (!std::isfinite(tail)) {
      settled = 0;
      prev_total = std::numeric_limits<double>::quiet_NaN();
      out.value = out.partial_sum;
      out.error = kInf;
      continue;
    }
    const double total = out.partial_sum + tail;
    const double change = std::isnan(prev_total) ? kInf : std::abs(total - prev_total);
    prev_total = total;
    out.value = total;
    out.error = std::max(change, remainder);
    if (out.error <= tol.bound(std::abs(total)) && std::abs(tail) <= max_tail_fraction * std::abs(total)) {
      if (++settled >= 2) {
        out.converged = true;
        return out;
      }
    } else {
      settled = 0;
    }
  }
  return out;
}

double harmonic_sum(const std::function<double(int)>& term, const Tolerance& tol, int n_max_cap) {
  const SeriesResult r = harmonic_sum_partial(term, tol, n_max_cap);
  if (!r.converged) {
    throw ConvergenceError("harmonic_sum: cap reached before convergence", r.value, r.error);
  }
  return r.value;
}

}  // namespace synchrad::numerics
