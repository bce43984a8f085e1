#include <algorithm>
#include <cmath>
#include <string>

#include "synchrad/numerics.hpp"

namespace synchrad::numerics {

namespace {

void check_range(int n, double x) {
  if (n < 0 || n > kBesselMaxOrder) {
    throw RangeError("bessel_j: order " + std::to_string(n) + " outside [0, 1e6]");
  }
  if (!(std::abs(x) <= kBesselMaxArg)) {
    throw RangeError("bessel_j: argument outside [-1e8, 1e8]");
  }
}

struct J01 {
  double j0;
  double j1;
};

// Hankel asymptotic expansion for J_0 and J_1, used for x >= 25 where the
// smallest term is far below double precision.
J01 hankel_j01(double x) {
  auto eval = [x](double nu) {
    const double mu = 4.0 * nu * nu;
    double p = 1.0;
    double q = 0.0;
    double term = 1.0;
    double last = 1.0;
    for (int k = 1; k < 60; ++k) {
      const double odd = 2.0 * k - 1.0;
      term *= (mu - odd * odd) / (k * 8.0 * x);
      if (std::abs(term) > last) break;
      last = std::abs(term);
      // a_k / x^k alternates between Q (odd k) and P (even k) with sign (-1)^floor(k/2).
      const double signed_term = ((k / 2) % 2 == 0) ? term : -term;
      if (k % 2 == 1) {
        q += signed_term;
      } else {
        p += signed_term;
      }
      if (last < 1e-17) break;
    }
    const double chi = x - (0.5 * nu + 0.25) * kPi;
    return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
  };
  return {eval(0.0), eval(1.0)};
}

// Miller's downward recurrence. Fills J_n and J_{n+1} for n + 1 > x.
// Normalized by J_0 + 2 sum J_2k = 1 for small x, or by least squares against
// the Hankel values of J_0, J_1 for large x.
void miller(int n, double x, double& jn, double& jn1) {
  const int top = n + 1;
  int start = top + 30 + static_cast<int>(std::sqrt(400.0 * top));
  if (start % 2 == 1) ++start;
  double bkp1 = 0.0;
  double bk = 1e-300;
  double sum = 0.0;
  double vn = 0.0;
  double vn1 = 0.0;
  double v0 = 0.0;
  double v1 = 0.0;
  const double two_over_x = 2.0 / x;
  for (int k = start; k >= 1; --k) {
    // bk holds the unnormalized J_k; compute J_{k-1}.
    const double bkm1 = k * two_over_x * bk - bkp1;
    bkp1 = bk;
    bk = bkm1;
    if (std::abs(bk) > 1e250) {
      bk *= 1e-250;
      bkp1 *= 1e-250;
      sum *= 1e-250;
      vn *= 1e-250;
      vn1 *= 1e-250;
      v1 *= 1e-250;
    }
    const int idx = k - 1;
    if (idx == n) vn = bk;
    if (idx == n + 1) vn1 = bk;
    if (idx == 1) v1 = bk;
    if (idx == 0) v0 = bk;
    if (idx > 0 && idx % 2 == 0) sum += 2.0 * bk;
  }
  double scale;
  if (x < 25.0) {
    scale = 1.0 / (v0 + sum);
  } else {
    const J01 h = hankel_j01(x);
    const double m = std::max(std::abs(v0), std::abs(v1));
    const double a = v0 / m;
    const double b = v1 / m;
    scale = (h.j0 * a + h.j1 * b) / (m * (a * a + b * b));
  }
  jn = vn * scale;
  jn1 = vn1 * scale;
}

J01 j01(double x) {
  if (x >= 25.0) return hankel_j01(x);
  double a = 0.0;
  double b = 0.0;
  miller(0, x, a, b);
  return {a, b};
}

// J_n and J_{n+1} for x > 0.
void j_pair(int n, double x, double& jn, double& jn1) {
  if (n + 1 <= x) {
    const J01 s = j01(x);
    double jm = s.j0;
    double jc = s.j1;
    if (n == 0) {
      jn = jm;
      jn1 = jc;
      return;
    }
    for (int k = 1; k < n; ++k) {
      const double jp = 2.0 * k / x * jc - jm;
      jm = jc;
      jc = jp;
    }
    jn = jc;
    jn1 = 2.0 * n / x * jc - jm;
    return;
  }
  miller(n, x, jn, jn1);
}

}  // namespace

BesselPair bessel_j_with_prime(int n, double x) {
  check_range(n, x);
  if (x == 0.0) {
    return {n == 0 ? 1.0 : 0.0, n == 1 ? 0.5 : 0.0};
  }
  const double ax = std::abs(x);
  double jn = 0.0;
  double jn1 = 0.0;
  j_pair(n, ax, jn, jn1);
  // J_n' = (n/x) J_n - J_{n+1}
  double jp = (n == 0) ? -jn1 : n / ax * jn - jn1;
  if (x < 0.0) {
    if (n % 2 == 1) jn = -jn;
    if (n % 2 == 0) jp = -jp;
  }
  return {jn, jp};
}

double bessel_j(int n, double x) { return bessel_j_with_prime(n, x).j; }

double bessel_j_prime(int n, double x) { return bessel_j_with_prime(n, x).jprime; }

BesselPair bessel_j_uniform(double nu, double w2) {
  if (!(nu >= 1.0) || !(w2 > 0.0) || !(w2 < 1.0)) {
    throw DomainError("bessel_j_uniform: requires nu >= 1 and 0 < 1 - z^2 < 1");
  }
  const double w = std::sqrt(w2);
  const double z = std::sqrt(1.0 - w2);
  // (2/3) zeta^(3/2) = atanh(w) - w
  double xi;
  if (w < 0.1) {
    double term = w * w2;
    xi = 0.0;
    for (int k = 1; k < 40; ++k) {
      const double add = term / (2.0 * k + 1.0);
      xi += add;
      if (add < 1e-18 * xi) break;
      term *= w2;
    }
  } else {
    xi = std::atanh(w) - w;
  }
  const double zeta = std::cbrt(1.5 * xi * 1.5 * xi);
  const double phi = std::sqrt(std::sqrt(4.0 * zeta / w2));
  double b0;
  double c0;
  if (w < 2e-3) {
    b0 = std::cbrt(2.0) / 70.0;
    c0 = std::cbrt(4.0) / 10.0;
  } else {
    const double w3 = w2 * w;
    const double sz = std::sqrt(zeta);
    b0 = -5.0 / (48.0 * zeta * zeta) + (5.0 / (24.0 * w3) - 1.0 / (8.0 * w)) / sz;
    c0 = 7.0 / (48.0 * zeta) + sz * (-7.0 / (24.0 * w3) + 3.0 / (8.0 * w));
  }
  const double nu13 = std::cbrt(nu);
  const double nu23 = nu13 * nu13;
  const AiryPair a = airy_unchecked(nu23 * zeta);
  const double j = phi * (a.ai / nu13 + a.aiprime * b0 / (nu * nu23));
  const double jp = -(2.0 / z) / phi * (a.ai * c0 / (nu * nu13) + a.aiprime / nu23);
  return {j, jp};
}

}  // namespace synchrad::numerics
