#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "synchrad/decoherence.hpp"
#include "synchrad/errors.hpp"

using namespace synchrad;
using numerics::kPi;

namespace {

constexpr double c = kSpeedOfLight;

// S/t for theta0 = pi/2, summed harmonic by harmonic with Boost Bessel functions.
double s_rate_transverse_oracle(double r, const BeamParams& b, int n_max) {
  double sum = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    auto f = [&](double th) {
      const double s = std::sin(th);
      const double cot = std::cos(th) / s;
      const double x = n * b.beta * s;
      const double j = boost::math::cyl_bessel_j(n, x);
      const double jp = boost::math::cyl_bessel_j_prime(n, x);
      const double k = r * n * b.omega0 * s / c;
      return s * (cot * cot * j * j + b.beta * b.beta * jp * jp) * (1.0 - boost::math::cyl_bessel_j(0, k));
    };
    sum += n * b.omega0 * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, kPi, 25, 1e-13);
  }
  return b.Z * b.Z / c * sum;
}

// Same along the field axis: the factor is 1 - cos(r n w0 cos(theta)/c).
double s_rate_longitudinal_oracle(double r, const BeamParams& b, int n_max) {
  double sum = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    auto f = [&](double th) {
      const double s = std::sin(th);
      const double cot = std::cos(th) / s;
      const double x = n * b.beta * s;
      const double j = boost::math::cyl_bessel_j(n, x);
      const double jp = boost::math::cyl_bessel_j_prime(n, x);
      return s * (cot * cot * j * j + b.beta * b.beta * jp * jp) * (1.0 - std::cos(r * n * b.omega0 * std::cos(th) / c));
    };
    sum += n * b.omega0 * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, kPi, 25, 1e-13);
  }
  return b.Z * b.Z / c * sum;
}

// Trapezoid rule on an arbitrary grid.
template <class F>
double trapezoid(const std::vector<double>& x, F&& f) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) s += 0.5 * (x[i + 1] - x[i]) * (f(i) + f(i + 1));
  return s;
}

}  // namespace

TEST_CASE("averaged exponent against a harmonic-by-harmonic oracle") {
  const BeamParams b = beam_from_beta(0.3, 50.0);
  const double q1 = b.omega0 / c;
  for (double x : {0.05, 0.7, 4.0}) {
    const double r = x / q1;
    CHECK(s_averaged(r, kPi / 2, 1.0, b) == doctest::Approx(s_rate_transverse_oracle(r, b, 40)).epsilon(1e-6));
    CHECK(s_averaged(r, 0.0, 1.0, b) == doctest::Approx(s_rate_longitudinal_oracle(r, b, 40)).epsilon(1e-6));
  }
}

TEST_CASE("averaged exponent: zero, linearity, sign") {
  const BeamParams b = beam_from_gamma(2.0, 100.0);
  CHECK(s_averaged(0.0, 0.3, 5.0, b) == 0.0);
  const double q1 = b.omega0 / c;
  for (double th : {0.0, 0.6, kPi / 2}) {
    for (double x : {0.01, 0.3, 3.0}) {
      const double s1 = s_averaged(x / q1, th, 1.0, b);
      CHECK(s1 >= 0.0);
      CHECK(s_averaged(x / q1, th, 2.0, b) == 2.0 * s1);
    }
  }
}

TEST_CASE("axis profile") {
  const BeamParams b = beam_from_gamma(2.0, 100.0);
  const double q1 = b.omega0 / c;
  const double total = total_photon_rate(b);
  for (Axis axis : {Axis::transverse, Axis::longitudinal}) {
    const AxisProfile p(b, axis);
    const double th = axis == Axis::transverse ? kPi / 2 : 0.0;
    CHECK(p.rate() == doctest::Approx(total).epsilon(1e-6));
    CHECK(p.s_rate(0.0) == 0.0);
    CHECK(p.s(2.0 / q1, 3.0) == doctest::Approx(3.0 * p.s_rate(2.0 / q1)).epsilon(1e-15));
    for (double x : {0.01, 0.3, 3.0, 30.0}) {
      CHECK(p.s_rate(x / q1) == doctest::Approx(s_averaged(x / q1, th, 1.0, b)).epsilon(1e-3));
    }
    // Far beyond the orbit the exponent is the number of emitted photons.
    CHECK(p.s_rate(1e6 / q1) == doctest::Approx(total).epsilon(0.01));
    double mass = 0.0;
    for (double m : p.masses()) {
      CHECK(m >= 0.0);
      mass += m;
    }
    CHECK(mass == doctest::Approx(p.rate()).epsilon(1e-12));
    CHECK(p.edges().front() == 0.0);
  }
}

TEST_CASE("ultrarelativistic form") {
  const BeamParams b = beam_from_gamma(1000.0, 1000.0);
  CHECK(ultrarel_window_ok(b, 0.1));
  CHECK_FALSE(ultrarel_window_ok(b, 0.005));
  CHECK_FALSE(ultrarel_window_ok(b, 0.5));
  CHECK(s_ultrarel(0.0, kPi / 2, 1.0, b, 0.1) == 0.0);
  const double qm = b.gamma * b.gamma * b.gamma * b.omega0 / c;
  for (double th : {0.0, kPi / 2}) {
    for (double x : {0.1, 1.0}) {
      const double a = s_ultrarel(x / qm, th, 1.0, b, 0.1);
      CHECK(s_ultrarel(x / qm, th, 1.0, b, 0.15) == doctest::Approx(a).epsilon(0.02));
      CHECK(a > 0.0);
    }
  }
  const double r = 0.1 / qm;
  CHECK(s_ultrarel(r, kPi / 2, 1.0, b, 0.1) == doctest::Approx(s_averaged(r, kPi / 2, 1.0, b)).epsilon(0.05));
}

TEST_CASE("decoherence field and kernel") {
  const BeamParams b = beam_from_gamma(2.0, 100.0);
  const double q1 = b.omega0 / c;
  const std::vector<double> r{0.0, 0.1 / q1, 1.0 / q1, 10.0 / q1};
  const std::vector<double> th{0.0, kPi / 4, kPi / 2};
  const DecoherenceField f1 = decoherence_field(b, 7.0, r, th, {1e-7, 0.0}, 1);
  const DecoherenceField f3 = decoherence_field(b, 7.0, r, th, {1e-7, 0.0}, 3);
  CHECK(f1.values == f3.values);
  for (std::size_t j = 0; j < th.size(); ++j) CHECK(f1.at(0, j) == 0.0);
  CHECK(f1.at(2, 1) == s_averaged(r[2], th[1], 7.0, b));
  for (double g : coherence_kernel(f1)) {
    CHECK(g > 0.0);
    CHECK(g <= 1.0);
  }
}

TEST_CASE("chi spectrum of a Gaussian kernel") {
  const double w = 3.0;
  KernelSlice slice;
  slice.r.push_back(0.0);
  for (int i = 0; i < 4000; ++i) slice.r.push_back(1e-3 * std::pow(10.0, 5.0 * i / 3999.0));
  for (double r : slice.r) slice.g.push_back(std::exp(-r * r / (2 * w * w)));
  const ChiSpectrum s = chi_spectrum(slice);
  REQUIRE(s.k.front() == 0.0);
  for (std::size_t i = 0; i < s.k.size(); i += 37) {
    const double ref = std::sqrt(2.0 * kPi) * w * std::exp(-0.5 * s.k[i] * s.k[i] * w * w);
    CHECK(std::abs(s.gk[i] - ref) <= 1e-4 * ref + 1e-6);
    CHECK(s.chi[i] == doctest::Approx(std::sqrt(s.gk[i])).epsilon(1e-15));
  }
  // |chi(x)|^2 is a Gaussian of variance w^2/4.
  CHECK(rms_width(s) == doctest::Approx(w / 2).epsilon(1e-3));

  // Round trip: the inverse transform of chi^2 returns the kernel.
  for (double r : {0.0, 1.0, 3.0, 6.0}) {
    const double back = trapezoid(s.k, [&](std::size_t i) { return s.chi[i] * s.chi[i] * std::cos(s.k[i] * r); }) / kPi;
    CHECK(back == doctest::Approx(std::exp(-r * r / (2 * w * w))).epsilon(1e-3).scale(1e-3));
  }
}

TEST_CASE("chi spectrum rejects kernels with a negative transform") {
  KernelSlice box;
  box.r = {0.0, 0.5, 1.0, 1.001};
  box.g = {1.0, 1.0, 1.0, 0.0};
  CHECK_THROWS_AS(chi_spectrum(box), DomainError);
}

TEST_CASE("localization widths for the 0.68 GeV ring") {
  const BeamParams b = fian60_beam();
  const AxisProfile pt(b, Axis::transverse);
  const AxisProfile pl(b, Axis::longitudinal);

  CHECK(localization_width(pt, 1.0) == kUnboundedWidth);
  CHECK(localization_width(pl, 1.0) == kUnboundedWidth);

  const KernelSlice ks = kernel_slice(pt, 1e11);
  CHECK(ks.r.front() == 0.0);
  CHECK(ks.g.front() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(ks.g.back()) < 1e-3);

  double prev_t = kUnboundedWidth;
  double prev_l = kUnboundedWidth;
  for (double t : {1e10, 1e11, 1e12, 1e13}) {
    const double wt = localization_width(pt, t);
    const double wl = localization_width(pl, t);
    REQUIRE(std::isfinite(wt));
    REQUIRE(std::isfinite(wl));
    CHECK(wt <= prev_t);
    CHECK(wl <= prev_l);
    CHECK(wl > wt);
    prev_t = wt;
    prev_l = wl;
  }

  const double target = localization_width(pt, 3e11);
  CHECK(localization_time(pt, target, 1e9, 1e14) == doctest::Approx(3e11).epsilon(0.01));
  CHECK(localization_time(pt, 10.0 * target, 1e9, 1e14) < 3e11);
  CHECK_THROWS_AS(localization_time(pt, 1e-12, 1e9, 1e10), RangeError);
}
