#include <cmath>

#include "synchrad/numerics.hpp"

namespace synchrad::numerics {

namespace {

constexpr long double kAi0 = 0.355028053887817239260063186004183176L;
constexpr long double kAip0 = 0.258819403792806798405183560189203963L;  // -Ai'(0)

// Below this the Maclaurin series in extended precision is used. The
// positive-side asymptotic series only reaches 1e-8 relative once
// exp(-2 zeta) is that small, around x = 5.7.
constexpr double kSeriesMax = 6.0;
constexpr double kSeriesMin = -8.0;

AiryPair maclaurin(double xd) {
  const long double x = xd;
  const long double x3 = x * x * x;
  long double f = 1.0L, t = 1.0L;
  long double g = x, s = x;
  long double fp = 0.5L * x * x, u = fp;
  long double gp = 1.0L, v = 1.0L;
  for (int k = 1; k < 200; ++k) {
    t *= x3 / ((3.0L * k - 1.0L) * (3.0L * k));
    s *= x3 / ((3.0L * k) * (3.0L * k + 1.0L));
    u *= x3 / ((3.0L * k) * (3.0L * k + 2.0L));
    v *= x3 / ((3.0L * k - 2.0L) * (3.0L * k));
    f += t;
    g += s;
    fp += u;
    gp += v;
    const long double m = fabsl(t) + fabsl(s) + fabsl(u) + fabsl(v);
    if (m < 1e-22L * (fabsl(f) + fabsl(g) + fabsl(fp) + fabsl(gp))) break;
  }
  return {static_cast<double>(kAi0 * f - kAip0 * g), static_cast<double>(kAi0 * fp - kAip0 * gp)};
}

// u_k and v_k coefficients of the Airy asymptotic expansions.
struct UV {
  double u[40];
  double v[40];
  int n = 40;
  UV() {
    u[0] = v[0] = 1.0;
    for (int k = 1; k < n; ++k) {
      u[k] = u[k - 1] * (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) /
             ((2.0 * k - 1.0) * 216.0 * k);
      v[k] = -(6.0 * k + 1.0) / (6.0 * k - 1.0) * u[k];
    }
  }
};

const UV& coeffs() {
  static const UV c;
  return c;
}

AiryPair asymptotic_positive(double x) {
  const UV& c = coeffs();
  const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
  double sa = 0.0, sd = 0.0, p = 1.0, last = 1e300;
  for (int k = 0; k < c.n; ++k) {
    const double ta = c.u[k] * p;
    if (std::abs(ta) > last) break;
    last = std::abs(ta);
    sa += ta;
    sd += c.v[k] * p;
    if (last < 1e-17) break;
    p *= -1.0 / zeta;
  }
  const double e = std::exp(-zeta);
  const double x14 = std::sqrt(std::sqrt(x));
  const double pref = e / (2.0 * std::sqrt(kPi));
  return {pref / x14 * sa, -pref * x14 * sd};
}

AiryPair asymptotic_negative(double xneg) {
  const UV& c = coeffs();
  const double x = -xneg;
  const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
  // Even and odd parts of the u and v series, each with alternating sign.
  double ue = 0.0, uo = 0.0, ve = 0.0, vo = 0.0;
  double p = 1.0, last = 1e300;
  for (int k = 0; k < c.n; ++k) {
    const double tu = c.u[k] * p;
    if (std::abs(tu) > last) break;
    last = std::abs(tu);
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      ue += sign * tu;
      ve += sign * c.v[k] * p;
    } else {
      uo += sign * tu;
      vo += sign * c.v[k] * p;
    }
    if (last < 1e-17) break;
    p /= zeta;
  }
  const double phase = zeta - kPi / 4.0;
  const double cs = std::cos(phase), sn = std::sin(phase);
  const double x14 = std::sqrt(std::sqrt(x));
  const double rp = 1.0 / std::sqrt(kPi);
  return {rp / x14 * (cs * ue + sn * uo), rp * x14 * (sn * ve - cs * vo)};
}

void check(double x) {
  if (!(x >= -20.0 && x <= 200.0)) throw RangeError("airy: argument outside [-20, 200]");
}

}  // namespace

AiryPair airy_unchecked(double x) {
  if (x < -20.0 || std::isnan(x)) throw RangeError("airy: argument below -20");
  if (x > 110.0) return {0.0, 0.0};
  if (x > kSeriesMax) return asymptotic_positive(x);
  if (x < kSeriesMin) return asymptotic_negative(x);
  return maclaurin(x);
}

double airy_ai(double x) {
  check(x);
  return airy_unchecked(x).ai;
}

double airy_ai_prime(double x) {
  check(x);
  return airy_unchecked(x).aiprime;
}

}  // namespace synchrad::numerics
