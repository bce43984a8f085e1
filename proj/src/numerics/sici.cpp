#include <cmath>
#include <complex>
#include <limits>

#include "synchrad/numerics.hpp"

namespace synchrad::numerics {

namespace {

struct SiCi {
  double si;
  double ci;   // Ci(t), only meaningful for t > 0
  double cin;  // gamma + ln t - Ci(t)
};

// Power series; t <= 2.
SiCi series(double t) {
  double si = 0.0, cin = 0.0;
  double term = t;  // t^(2k+1)/(2k+1)! with sign
  for (int k = 0; k < 40; ++k) {
    const double add = term / (2.0 * k + 1.0);
    si += add;
    if (std::abs(add) < 1e-18 * std::abs(si)) break;
    term *= -t * t / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
  }
  double c = -t * t / 2.0;  // (-1)^k t^(2k)/(2k)!, k = 1
  for (int k = 1; k < 40; ++k) {
    const double add = c / (2.0 * k);
    cin -= add;
    if (std::abs(add) < 1e-18 * std::abs(cin)) break;
    c *= -t * t / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
  }
  const double ci = t > 0.0 ? kEulerGamma + std::log(t) - cin : -std::numeric_limits<double>::infinity();
  return {si, ci, cin};
}

// Continued fraction for E1(i t) by modified Lentz; t > 2.
SiCi continued_fraction(double t) {
  using C = std::complex<double>;
  const double tiny = 1e-300;
  C b(1.0, t);
  C c(1.0 / tiny, 0.0);
  C d = 1.0 / b;
  C h = d;
  for (int i = 2; i < 100000; ++i) {
    const double a = -static_cast<double>(i - 1) * (i - 1);
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const C del = c * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < 1e-16) break;
  }
  h *= C(std::cos(t), -std::sin(t));
  const double ci = -h.real();
  const double si = kPi / 2.0 + h.imag();
  return {si, ci, kEulerGamma + std::log(t) - ci};
}

SiCi eval(double t) { return t <= 2.0 ? series(t) : continued_fraction(t); }

}  // namespace

double sin_integral(double x) {
  if (std::isnan(x)) return x;
  if (std::isinf(x)) return std::copysign(kPi / 2.0, x);
  const double s = eval(std::abs(x)).si;
  return x < 0.0 ? -s : s;
}

double cos_integral(double x) {
  if (!(x > 0.0)) throw DomainError("cos_integral: requires x > 0");
  if (std::isinf(x)) return 0.0;
  return eval(x).ci;
}

double cos_integral_entire(double x) {
  const double t = std::abs(x);
  if (t == 0.0) return 0.0;
  return eval(t).cin;
}

}  // namespace synchrad::numerics
