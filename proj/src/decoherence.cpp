#include "synchrad/decoherence.hpp"

#include <algorithm>
#include <cmath>

#include "synchrad/errors.hpp"
#include "synchrad/parallel.hpp"
#include "synchrad/quadrature.hpp"

namespace synchrad {

using numerics::CompensatedSum;
using numerics::Integration;
using numerics::integrate_panels;
using numerics::kPi;

namespace {

constexpr double c = kSpeedOfLight;

// 1 - J0(x) without cancellation for small x.
double one_minus_j0(double x) {
  x = std::abs(x);
  if (x < 0.25) {
    const double y = 0.25 * x * x;
    // sum_{k>=1} (-1)^(k+1) y^k/(k!)^2
    return y * (1.0 - y * (0.25 - y * (1.0 / 36.0 - y * (1.0 / 576.0 - y / 14400.0))));
  }
  return 1.0 - numerics::bessel_j(0, x);
}

double j0_any(double x) {
  x = std::abs(x);
  if (x <= 1e8) return numerics::bessel_j(0, x);
  return std::sqrt(2.0 / (kPi * x)) * std::cos(x - 0.25 * kPi);
}

double j1_any(double x) {
  if (x <= 1e8) return numerics::bessel_j(1, x);
  return std::sqrt(2.0 / (kPi * x)) * std::cos(x - 0.75 * kPi);
}

// 1 - J0(a) cos(b), split so that neither part cancels.
double factor(double a, double b) {
  const double s = std::sin(0.5 * b);
  return one_minus_j0(a) + j0_any(a) * 2.0 * s * s;
}

std::vector<double> oscillation_breaks(double a, double b, double phase_span) {
  const int panels = static_cast<int>(std::clamp(std::ceil(phase_span / kPi), 1.0, 4000.0));
  return numerics::uniform_breaks(a, b, panels);
}

void check_args(double r, double theta0, double t, const BeamParams& beam, const char* who) {
  beam.validate();
  if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError(std::string(who) + ": r must be finite and >= 0");
  if (!(theta0 >= 0.0 && theta0 <= kPi)) throw DomainError(std::string(who) + ": theta0 outside [0, pi]");
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError(std::string(who) + ": t must be finite and >= 0");
}

}  // namespace

double s_averaged(double r, double theta0, double t, const BeamParams& beam, const Tolerance& tol) {
  check_args(r, theta0, t, beam, "s_averaged");
  tol.validate();
  if (r == 0.0 || t == 0.0 || beam.beta == 0.0) return 0.0;
  const double q1 = beam.omega0 / c;
  const double st0 = std::sin(theta0);
  const double ct0 = std::cos(theta0);
  const Tolerance inner{std::max(1e-13, 0.01 * tol.rel), 0.0};
  auto per_harmonic = [&](double nu) {
    const double a = r * nu * q1 * st0;
    const double b = r * nu * q1 * ct0;
    auto f = [&](double u) {
      const double s = std::sqrt((1.0 - u) * (1.0 + u));
      return schott_bracket(nu, u, beam) * factor(a * s, b * u);
    };
    const std::vector<double> br =
        numerics::merge_breaks(schott_u_breaks(nu, beam), oscillation_breaks(0.0, 1.0, std::abs(a) + std::abs(b)));
    const Integration<double> res = integrate_panels<double>(f, br, inner);
    if (!res.converged) throw ConvergenceError("s_averaged: angular quadrature did not converge", res.value, res.error);
    return 2.0 * beam.Z * beam.Z * nu * beam.omega0 / c * res.value;
  };
  // 0 <= factor <= 2, so twice the plain harmonic rate dominates the terms.
  auto bound = [&](double nu) {
    auto f = [&](double u) { return schott_bracket(nu, u, beam); };
    const Integration<double> res = integrate_panels<double>(f, schott_u_breaks(nu, beam), inner);
    return 4.0 * beam.Z * beam.Z * nu * beam.omega0 / c * res.value;
  };
  return t * sum_over_harmonics(per_harmonic, beam, tol, 0.0, bound).value;
}

bool ultrarel_window_ok(const BeamParams& beam, double epsilon) {
  return epsilon * beam.gamma >= 10.0 && epsilon <= 0.3;
}

double s_ultrarel(double r, double theta0, double t, const BeamParams& beam, double epsilon, const Tolerance& tol) {
  check_args(r, theta0, t, beam, "s_ultrarel");
  tol.validate();
  if (!(epsilon > 0.0 && epsilon < 0.5 * kPi)) throw DomainError("s_ultrarel: epsilon outside (0, pi/2)");
  if (r == 0.0 || t == 0.0 || beam.beta == 0.0) return 0.0;
  const double g = beam.gamma;
  const double beta = beam.beta;
  const double q1 = beam.omega0 / c;
  const double st0 = std::sin(theta0);
  const double ct0 = std::cos(theta0);
  const double u_max = std::sin(epsilon);
  const double s0 = 1.0 / (epsilon * epsilon * epsilon);
  const double c23 = std::cbrt(4.0);  // 2^(2/3)
  const Tolerance inner{std::max(1e-13, 0.01 * tol.rel), 0.0};
  auto outer = [&](double sv) {
    const double a = r * sv * q1 * st0;
    const double b = r * sv * q1 * ct0;
    const double z0 = std::pow(0.5 * sv, 2.0 / 3.0);
    auto f = [&](double u) {
      const double s2 = (1.0 - u) * (1.0 + u);
      const double z = z0 * (1.0 / (g * g) + beta * beta * u * u);  // 1 - beta^2 sin^2
      const numerics::AiryPair ai = numerics::airy_unchecked(z);
      const double k = u * u / s2 * ai.ai * ai.ai +
                       beta * beta * beta * beta * c23 * s2 / std::pow(sv, 2.0 / 3.0) * ai.aiprime * ai.aiprime;
      return k * factor(a * std::sqrt(s2), b * u);
    };
    std::vector<double> br = schott_u_breaks(sv, beam);
    for (double& x : br) x = std::min(x, u_max);
    br.erase(std::unique(br.begin(), br.end()), br.end());
    br = numerics::merge_breaks(br, oscillation_breaks(0.0, u_max, (std::abs(a) + std::abs(b)) * u_max));
    const Integration<double> res = integrate_panels<double>(f, br, inner);
    if (!res.converged) throw ConvergenceError("s_ultrarel: angular quadrature did not converge", res.value, res.error);
    return std::cbrt(sv) * 2.0 * res.value;  // both halves of the theta window
  };
  // Ai^2 of (s/2)^(2/3)/gamma^2 is negligible once that argument passes ~110.
  const double s_max = std::max(2.0 * s0, 2.0 * std::pow(120.0 * g * g, 1.5));
  std::vector<double> br;
  for (double x = s0; x < s_max; x *= 1.5) br.push_back(x);
  br.push_back(s_max);
  const Integration<double> res = integrate_panels<double>(outer, br, tol);
  if (!res.converged) throw ConvergenceError("s_ultrarel: harmonic integral did not converge", res.value, res.error);
  return t * c23 * beam.Z * beam.Z * beam.omega0 / c * res.value;
}

// ---------------------------------------------------------------------------

AxisProfile::AxisProfile(const BeamParams& beam, Axis axis, int bins_per_decade) : beam_(beam), axis_(axis) {
  beam.validate();
  if (bins_per_decade < 1) throw DomainError("AxisProfile: bins_per_decade must be positive");
  const double q1 = beam.omega0 / c;
  const double g = beam.gamma;
  const double cap = 50.0 * g * g * g;
  const double k_lo = 1e-3 * q1;
  const double k_hi = (cap + 1.0) * q1;
  edges_.push_back(0.0);
  const int nb = static_cast<int>(std::ceil(bins_per_decade * std::log10(k_hi / k_lo)));
  for (int i = 0; i <= nb; ++i) edges_.push_back(k_lo * std::pow(10.0, static_cast<double>(i) / bins_per_decade));
  masses_.assign(edges_.size() - 1, 0.0);
  if (beam.beta == 0.0) return;

  // Harmonic nodes: integers up to kUniformBesselOrder, then Gauss-Legendre
  // panels in the continuous harmonic number.
  std::vector<double> nu;
  std::vector<double> wnu;
  const int n_exp = static_cast<int>(std::min<double>(kUniformBesselOrder, std::floor(cap)));
  for (int n = 1; n <= n_exp; ++n) {
    nu.push_back(n);
    wnu.push_back(1.0);
  }
  if (cap > n_exp) {
    const numerics::GaussRule gl = numerics::gauss_legendre(8);
    const double top = cap + 0.5;
    for (double a = n_exp + 0.5; a < top;) {
      const double b = std::min(top, a * 1.25);
      for (int i = 0; i < 8; ++i) {
        nu.push_back(0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[i]);
        wnu.push_back(0.5 * (b - a) * gl.weights[i]);
      }
      a = b;
    }
  }

  const numerics::GaussRule gu = numerics::gauss_legendre(12);
  std::vector<std::vector<double>> partial(nu.size());
  parallel_for(nu.size(), static_cast<int>(std::max(1u, std::thread::hardware_concurrency())), [&](std::size_t idx) {
    const double v = nu[idx];
    const double kmax = v * q1;
    const double pref = wnu[idx] * 2.0 * beam.Z * beam.Z * v * beam.omega0 / c;
    std::vector<double> br = schott_u_breaks(v, beam);
    for (std::size_t j = 1; j < edges_.size(); ++j) {
      const double x = edges_[j] / kmax;
      if (x >= 1.0) break;
      br.push_back(axis == Axis::transverse ? std::sqrt((1.0 - x) * (1.0 + x)) : x);
    }
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    std::vector<double> m(2 * masses_.size(), 0.0);  // mass, then mass * K^2
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
      const double a = br[i];
      const double b = br[i + 1];
      if (!(b > a)) continue;
      auto proj = [&](double u) { return axis == Axis::transverse ? kmax * std::sqrt((1.0 - u) * (1.0 + u)) : kmax * u; };
      double sum = 0.0;
      double sum2 = 0.0;
      for (int k = 0; k < 12; ++k) {
        const double u = 0.5 * (a + b) + 0.5 * (b - a) * gu.nodes[k];
        const double w = gu.weights[k] * schott_bracket(v, u, beam);
        const double kk = proj(u);
        sum += w;
        sum2 += w * kk * kk;
      }
      const auto it = std::upper_bound(edges_.begin(), edges_.end(), proj(0.5 * (a + b)));
      const std::size_t bin =
          std::min<std::size_t>(masses_.size() - 1, static_cast<std::size_t>(it - edges_.begin()) - 1);
      m[bin] += pref * 0.5 * (b - a) * sum;
      m[masses_.size() + bin] += pref * 0.5 * (b - a) * sum2;
    }
    partial[idx] = std::move(m);
  });
  const std::size_t nbins = masses_.size();
  lo_.resize(nbins);
  hi_.resize(nbins);
  for (std::size_t j = 0; j < nbins; ++j) {
    CompensatedSum s;
    CompensatedSum s2;
    for (const auto& m : partial) {
      s.add(m[j]);
      s2.add(m[nbins + j]);
    }
    masses_[j] = s.value();
    const double a = edges_[j];
    const double b = edges_[j + 1];
    lo_[j] = a;
    hi_[j] = b;
    if (masses_[j] <= 0.0) continue;
    const double mk2 = std::clamp(s2.value() / masses_[j], a * a, b * b);
    if (axis == Axis::transverse) {
      // density ~ K on [lo, hi]: <K^2> = (lo^2 + hi^2)/2
      if (2.0 * mk2 - b * b >= a * a) {
        lo_[j] = std::sqrt(2.0 * mk2 - b * b);
      } else {
        hi_[j] = std::sqrt(2.0 * mk2 - a * a);
      }
    } else {
      // flat density on [lo, hi]: <K^2> = (lo^2 + lo hi + hi^2)/3
      if (3.0 * mk2 >= a * a + a * b + b * b) {
        lo_[j] = std::clamp(0.5 * (-b + std::sqrt(std::max(0.0, 12.0 * mk2 - 3.0 * b * b))), a, b);
      } else {
        hi_[j] = std::clamp(0.5 * (-a + std::sqrt(std::max(0.0, 12.0 * mk2 - 3.0 * a * a))), a, b);
      }
    }
  }
  CompensatedSum total;
  for (double m : masses_) total.add(m);
  rate_ = total.value();
}

double AxisProfile::s_rate(double r) const {
  if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("AxisProfile::s_rate: r must be finite and >= 0");
  if (r == 0.0) return 0.0;
  CompensatedSum s;
  for (std::size_t j = 0; j < masses_.size(); ++j) {
    const double m = masses_[j];
    if (m == 0.0) continue;
    const double xa = r * lo_[j];
    const double xb = r * hi_[j];
    double avg;  // bin average of 1 - J0(rK) or 1 - cos(rK)
    if (axis_ == Axis::transverse) {
      // density proportional to K inside the bin
      if (xb < 0.05) {
        const double a2 = xa * xa;
        const double b2 = xb * xb;
        const double m2 = 0.5 * (a2 + b2);
        const double m4 = (a2 * a2 + a2 * b2 + b2 * b2) / 3.0;
        const double m6 = (a2 * a2 * a2 + a2 * a2 * b2 + a2 * b2 * b2 + b2 * b2 * b2) / 4.0;
        avg = m2 / 4.0 - m4 / 64.0 + m6 / 2304.0;
      } else if (xb - xa <= 1e-6 * xb) {
        avg = one_minus_j0(xb);
      } else {
        avg = 1.0 - 2.0 * (xb * j1_any(xb) - xa * j1_any(xa)) / (xb * xb - xa * xa);
      }
    } else {
      // uniform density inside the bin
      if (xb < 0.05) {
        const double d = xb - xa;
        const double m2 = (xa * xa + xa * xb + xb * xb) / 3.0;
        const double m4 = d > 0.0 ? (std::pow(xb, 5) - std::pow(xa, 5)) / (5.0 * d) : std::pow(xb, 4);
        const double m6 = d > 0.0 ? (std::pow(xb, 7) - std::pow(xa, 7)) / (7.0 * d) : std::pow(xb, 6);
        avg = m2 / 2.0 - m4 / 24.0 + m6 / 720.0;
      } else if (xb - xa <= 1e-6 * xb) {
        avg = 1.0 - std::cos(xb);
      } else {
        avg = 1.0 - (std::sin(xb) - std::sin(xa)) / (xb - xa);
      }
    }
    s.add(m * avg);
  }
  return s.value();
}

// ---------------------------------------------------------------------------

DecoherenceField decoherence_field(const BeamParams& beam, double t, const std::vector<double>& r,
                                   const std::vector<double>& theta0, const Tolerance& tol, int threads) {
  DecoherenceField f;
  f.beam = beam;
  f.t = t;
  f.r = r;
  f.theta0 = theta0;
  f.values.assign(r.size() * theta0.size(), 0.0);
  parallel_for(f.values.size(), threads, [&](std::size_t idx) {
    const std::size_t i = idx / theta0.size();
    const std::size_t j = idx % theta0.size();
    f.values[idx] = s_averaged(r[i], theta0[j], t, beam, tol);
  });
  return f;
}

std::vector<double> coherence_kernel(const DecoherenceField& field) {
  std::vector<double> g(field.values.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::exp(-field.values[i]);
  return g;
}

namespace {

// sin(x)/x
double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

// (sin x - x cos x)/x^3
double odd_kernel(double x) {
  if (std::abs(x) < 1e-2) {
    const double x2 = x * x;
    return 1.0 / 3.0 - x2 / 30.0 + x2 * x2 / 840.0;
  }
  return (std::sin(x) - x * std::cos(x)) / (x * x * x);
}

}  // namespace

ChiSpectrum chi_spectrum(const KernelSlice& slice, int points_per_decade, double neg_tol) {
  const std::size_t n = slice.r.size();
  if (n < 3 || slice.g.size() != n) throw DomainError("chi_spectrum: need at least 3 matching samples");
  if (slice.r[0] != 0.0) throw DomainError("chi_spectrum: the slice must start at r = 0");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(slice.r[i] > slice.r[i - 1])) throw DomainError("chi_spectrum: r must be increasing");
  }
  if (points_per_decade < 1) throw DomainError("chi_spectrum: points_per_decade must be positive");
  const double k_lo = 0.01 / slice.r.back();
  const double k_hi = 100.0 / slice.r[1];
  ChiSpectrum out;
  out.k.push_back(0.0);
  const int m = static_cast<int>(std::ceil(points_per_decade * std::log10(k_hi / k_lo)));
  for (int i = 0; i <= m; ++i) out.k.push_back(k_lo * std::pow(10.0, static_cast<double>(i) / points_per_decade));
  out.gk.resize(out.k.size());
  double gmax = 0.0;
  for (std::size_t ik = 0; ik < out.k.size(); ++ik) {
    const double k = out.k[ik];
    CompensatedSum s;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double a = slice.r[i];
      const double b = slice.r[i + 1];
      const double h = b - a;
      const double mid = 0.5 * (a + b);
      const double fm = 0.5 * (slice.g[i] + slice.g[i + 1]);
      const double slope = (slice.g[i + 1] - slice.g[i]) / h;
      const double th = 0.5 * k * h;
      // integral of (fm + slope (r - mid)) cos(k r) over [a, b]
      s.add(fm * h * sinc(th) * std::cos(k * mid) - slope * std::sin(k * mid) * k * h * h * h * odd_kernel(th) / 4.0);
    }
    out.gk[ik] = 2.0 * s.value();
    gmax = std::max(gmax, out.gk[ik]);
  }
  out.chi.resize(out.k.size());
  for (std::size_t ik = 0; ik < out.k.size(); ++ik) {
    if (out.gk[ik] < -neg_tol * gmax) {
      throw DomainError("chi_spectrum: negative transform, kernel unphysical or under-resolved");
    }
    out.gk[ik] = std::max(0.0, out.gk[ik]);
    out.chi[ik] = std::sqrt(out.gk[ik]);
  }
  return out;
}

double rms_width(const ChiSpectrum& spectrum) {
  const auto& k = spectrum.k;
  const auto& x = spectrum.chi;
  if (k.size() < 2 || x.size() != k.size()) throw DomainError("rms_width: spectrum too short");
  CompensatedSum num;
  CompensatedSum den;
  for (std::size_t i = 0; i + 1 < k.size(); ++i) {
    const double h = k[i + 1] - k[i];
    const double d = (x[i + 1] - x[i]) / h;
    num.add(d * d * h);
    // exact for the piecewise-linear chi
    den.add(h * (x[i] * x[i] + x[i] * x[i + 1] + x[i + 1] * x[i + 1]) / 3.0);
  }
  if (!(den.value() > 0.0)) throw DomainError("rms_width: empty spectrum");
  return std::sqrt(num.value() / den.value());
}

KernelSlice kernel_slice(const AxisProfile& profile, double t, const WidthOptions& options) {
  if (!(t > 0.0)) throw DomainError("kernel_slice: t must be positive");
  if (!(options.r_min > 0.0 && options.r_max > options.r_min) || options.points < 2) {
    throw DomainError("kernel_slice: bad grid options");
  }
  const double n_total = t * profile.rate();
  const double denom = -std::expm1(-n_total);
  KernelSlice sl;
  sl.r.push_back(0.0);
  sl.g.push_back(1.0);
  const double ratio = std::log(options.r_max / options.r_min) / (options.points - 1);
  for (int i = 0; i < options.points; ++i) {
    const double r = options.r_min * std::exp(ratio * i);
    const double s = profile.s(r, t);
    sl.r.push_back(r);
    sl.g.push_back(-std::exp(-s) * std::expm1(-(n_total - s)) / denom);
  }
  return sl;
}

namespace {

double width_once(const AxisProfile& profile, double t, const WidthOptions& options) {
  const KernelSlice sl = kernel_slice(profile, t, options);
  if (std::abs(sl.g.back()) > options.edge_tol) return kUnboundedWidth;
  return rms_width(chi_spectrum(sl));
}

}  // namespace

double localization_width(const AxisProfile& profile, double t, const WidthOptions& options) {
  if (!(t > 0.0)) throw DomainError("localization_width: t must be positive");
  if (std::exp(-t * profile.rate()) >= 0.5) return kUnboundedWidth;
  WidthOptions o = options;
  double w = width_once(profile, t, o);
  for (int i = 0; i < options.max_doublings && std::isfinite(w); ++i) {
    o.points = 2 * o.points - 1;
    const double w2 = width_once(profile, t, o);
    const bool settled = std::abs(w2 - w) <= options.refine_tol * w2;
    w = w2;
    if (settled) break;
  }
  if (!std::isfinite(w)) return w;
  // A tail too heavy for a finite rms shows up as a width tracking r_max.
  WidthOptions wide = o;
  wide.r_max = 10.0 * o.r_max;
  const double decades = std::log10(o.r_max / o.r_min);
  wide.points = o.points + static_cast<int>(std::ceil((o.points - 1) / decades));
  const double w_wide = width_once(profile, t, wide);
  if (!(std::abs(w_wide - w) <= options.refine_tol * w)) return kUnboundedWidth;
  return w;
}

double localization_time(const AxisProfile& profile, double target_width, double t_lo, double t_hi,
                         const WidthOptions& options) {
  if (!(target_width > 0.0)) throw DomainError("localization_time: target width must be positive");
  if (!(t_lo > 0.0 && t_hi > t_lo)) throw DomainError("localization_time: need 0 < t_lo < t_hi");
  auto above = [&](double t) { return localization_width(profile, t, options) > target_width; };
  if (!above(t_lo) || above(t_hi)) throw RangeError("localization_time: target width not bracketed");
  double a = std::log(t_lo);
  double b = std::log(t_hi);
  while (b - a > 1e-6) {
    const double m = 0.5 * (a + b);
    if (above(std::exp(m))) {
      a = m;
    } else {
      b = m;
    }
  }
  return std::exp(0.5 * (a + b));
}

}  // namespace synchrad
