#include "synchrad/semiclassical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "synchrad/parallel.hpp"
#include "synchrad/quadrature.hpp"

namespace synchrad {

using numerics::CompensatedSum;
using numerics::Integration;
using numerics::integrate_panels;
using numerics::kPi;
using cplx = std::complex<double>;

namespace {

constexpr double c = kSpeedOfLight;
constexpr int kMaxOscillationPanels = 20000;

// Breakpoints on [a, b] with about one panel per half period of a phase that
// advances at most at rate `rate`.
std::vector<double> phase_breaks(double a, double b, double rate, const char* who) {
  const double span = rate * (b - a) / kPi;
  if (span > kMaxOscillationPanels) {
    throw ConvergenceError(std::string(who) + ": interval holds too many oscillation periods", 0.0,
                           std::numeric_limits<double>::infinity());
  }
  const int n = std::max(1, static_cast<int>(std::ceil(span)));
  return numerics::uniform_breaks(a, b, n);
}

}  // namespace

void Trajectory::validate() const {
  if (!r0 || !v0) throw DomainError("trajectory: position and velocity callbacks required");
  if (!(t_end > t_begin)) throw DomainError("trajectory: empty time domain");
  std::vector<double> samples;
  if (std::isfinite(t_begin) && std::isfinite(t_end)) {
    for (double f : {0.1, 0.5, 0.9}) samples.push_back(t_begin + f * (t_end - t_begin));
  } else {
    for (double t : {-1e3, -1.0, 0.0, 1.0, 1e3}) {
      if (t > t_begin && t < t_end) samples.push_back(t);
    }
    if (samples.empty()) samples.push_back(std::isfinite(t_begin) ? t_begin + 1.0 : t_end - 1.0);
  }
  for (double t : samples) {
    const Vec3 v = v0(t);
    const Vec3 r = r0(t);
    const double speed = norm(v);
    if (!(speed < c)) throw DomainError("trajectory: speed reaches c");
    const double scale = std::max({speed > 0.0 ? norm(r) / speed : 0.0, std::abs(t), 1.0});
    double h = 6e-6 * scale;
    if (std::isfinite(t_begin)) h = std::min(h, 0.5 * (t - t_begin));
    if (std::isfinite(t_end)) h = std::min(h, 0.5 * (t_end - t));
    const Vec3 fd = (r0(t + h) - r0(t - h)) / (2.0 * h);
    const double roundoff = 1e-10 * std::max(norm(r0(t + h)), norm(r0(t - h))) / h;
    if (norm(fd - v) > 1e-6 * speed + roundoff) {
      throw DomainError("trajectory: dr0/dt does not match v0 at t = " + std::to_string(t));
    }
  }
}

Trajectory circular_trajectory(const BeamParams& beam, double t_begin, double t_end) {
  beam.validate();
  const double R = beam.R;
  const double w = beam.omega0;
  const double v = beam.v0;
  Trajectory tr;
  tr.r0 = [R, w](double t) { return Vec3{R * std::sin(w * t), -R * std::cos(w * t), 0.0}; };
  tr.v0 = [v, w](double t) { return Vec3{v * std::cos(w * t), v * std::sin(w * t), 0.0}; };
  tr.t_begin = t_begin;
  tr.t_end = t_end;
  return tr;
}

Trajectory uniform_trajectory(const Vec3& v, const Vec3& r_at_zero, double t_begin, double t_end) {
  if (!(norm(v) < c)) throw DomainError("trajectory: speed reaches c");
  Trajectory tr;
  tr.r0 = [v, r_at_zero](double t) { return r_at_zero + v * t; };
  tr.v0 = [v](double) { return v; };
  tr.t_begin = t_begin;
  tr.t_end = t_end;
  return tr;
}

void PhotonMode::validate() const {
  if (alpha != 1 && alpha != 2) throw DomainError("photon mode: polarization index must be 1 or 2");
  if (!(norm(q) > 0.0) || !std::isfinite(norm(q))) throw DomainError("photon mode: |q| must be positive");
}

cplx coupling_amplitude(const Trajectory& traj, const PhotonMode& mode, double t, double Z, const Tolerance& tol) {
  mode.validate();
  tol.validate();
  if (!std::isfinite(traj.t_begin)) {
    throw DomainError("coupling_amplitude: trajectory must start at a finite time");
  }
  if (t < traj.t_begin || t > traj.t_end) throw DomainError("coupling_amplitude: t outside trajectory");
  if (t == traj.t_begin) return {0.0, 0.0};
  const Vec3 e = mode.polarization();
  const Vec3 q = mode.q;
  const double w = mode.omega();
  auto f = [&](double s) {
    const double proj = dot(e, traj.v0(s));
    const double phase = w * s - dot(q, traj.r0(s));
    return cplx(proj * std::cos(phase), proj * std::sin(phase));
  };
  const auto br = phase_breaks(traj.t_begin, t, 2.0 * w, "coupling_amplitude");
  const Integration<cplx> r = integrate_panels<cplx>(f, br, tol);
  if (!r.converged) {
    throw ConvergenceError("coupling_amplitude: quadrature did not converge", std::abs(r.value), r.error);
  }
  const double pref = Z / c * std::sqrt(mode.coupling_sq());
  return cplx(0.0, pref) * r.value;
}

double mean_photon_number(const Trajectory& traj, const PhotonMode& mode, double t, double Z, const Tolerance& tol) {
  return std::norm(coupling_amplitude(traj, mode, t, Z, tol));
}

cplx rate_integrand(const Trajectory& traj, const Vec3& q, double t, double tau, double Z) {
  const double qn = norm(q);
  if (!(qn > 0.0)) throw DomainError("rate_integrand: |q| must be positive");
  const double w = c * qn;
  const double g2 = 2.0 * kPi * c * c / w;
  const double t1 = t - std::abs(tau) / 2.0 + tau / 2.0;
  const double t2 = t - std::abs(tau) / 2.0 - tau / 2.0;
  const Vec3 v1 = traj.v0(t1);
  const Vec3 v2 = traj.v0(t2);
  const Vec3 qh = q / qn;
  const double amp = dot(v1, v2) - dot(qh, v1) * dot(qh, v2);
  const double phase = w * tau - dot(q, traj.r0(t1) - traj.r0(t2));
  return Z * Z / (c * c) * g2 * amp * cplx(std::cos(phase), std::sin(phase));
}

double rate_general(const Trajectory& traj, const Vec3& q, double t, double Z, double window, const Tolerance& tol) {
  tol.validate();
  if (!(window > 0.0)) throw DomainError("rate_general: window must be positive");
  if (!(norm(q) > 0.0)) throw DomainError("rate_general: |q| must be positive");
  if (t < traj.t_begin || t > traj.t_end) throw DomainError("rate_general: t outside trajectory");
  const double tau_max = std::min(40.0 * window, t - traj.t_begin);
  if (!(tau_max > 0.0)) return 0.0;
  auto f = [&](double tau) { return rate_integrand(traj, q, t, tau, Z) * std::exp(-tau / window); };
  const auto br = phase_breaks(0.0, tau_max, 2.0 * c * norm(q), "rate_general");
  const Integration<cplx> r = integrate_panels<cplx>(f, br, tol);
  if (!r.converged) {
    throw ConvergenceError("rate_general: quadrature did not converge", 2.0 * r.value.real(), 2.0 * r.error);
  }
  return 2.0 * r.value.real();
}

// ---------------------------------------------------------------------------

double schott_bracket(double nu, double u, const BeamParams& beam) {
  u = std::abs(u);
  if (u > 1.0) throw DomainError("schott_bracket: |cos theta| > 1");
  const double beta = beam.beta;
  if (beta == 0.0) return 0.0;
  const double s2 = (1.0 - u) * (1.0 + u);  // sin^2 theta
  if (s2 == 0.0) return nu == 1.0 ? 0.5 * beta * beta : 0.0;
  const double s = std::sqrt(s2);
  double j;
  double jp;
  if (nu < kUniformBesselOrder) {
    const int n = static_cast<int>(nu);
    if (n != nu || n < 1) throw DomainError("schott_bracket: low orders must be positive integers");
    const numerics::BesselPair b = numerics::bessel_j_with_prime(n, nu * beta * s);
    j = b.j;
    jp = b.jprime;
  } else {
    // 1 - beta^2 sin^2 = 1/gamma^2 + beta^2 cos^2
    const double w2 = 1.0 / (beam.gamma * beam.gamma) + beta * beta * u * u;
    const numerics::BesselPair b = numerics::bessel_j_uniform(nu, w2);
    j = b.j;
    jp = b.jprime;
  }
  return u * u / s2 * j * j + beta * beta * jp * jp;
}

std::vector<double> schott_u_breaks(double nu, const BeamParams& beam) {
  const double g = beam.gamma;
  const double w = 1.0 / (8.0 * g) * std::min(1.0, std::cbrt(g * g * g / nu));
  return numerics::geometric_breaks(0.0, 1.0, std::min(w, 0.25));
}

double schott_angular_rate(int n, double theta, const BeamParams& beam) {
  if (n < 1) throw DomainError("schott_angular_rate: harmonic must be >= 1");
  if (!(theta >= 0.0 && theta <= kPi)) throw DomainError("schott_angular_rate: theta outside [0, pi]");
  const double pref = beam.Z * beam.Z * n * beam.omega0 / (2.0 * kPi * c);
  return pref * schott_bracket(n, std::cos(theta), beam);
}

namespace {

Tolerance inner_tolerance(const Tolerance& tol) { return {std::max(1e-13, 0.01 * tol.rel), 0.0}; }

double harmonic_rate_impl(double nu, const BeamParams& beam, const Tolerance& tol) {
  if (beam.beta == 0.0) return 0.0;
  auto f = [&](double u) { return schott_bracket(nu, u, beam); };
  const Integration<double> r = integrate_panels<double>(f, schott_u_breaks(nu, beam), tol);
  if (!r.converged) {
    throw ConvergenceError("schott_harmonic_rate: angular quadrature did not converge", r.value, r.error);
  }
  // 2 pi * 2 * integral over u in [0, 1] of Z^2 nu w0 / (2 pi c) * bracket
  return 2.0 * beam.Z * beam.Z * nu * beam.omega0 / c * r.value;
}

}  // namespace

double schott_harmonic_rate(int n, const BeamParams& beam, const Tolerance& tol) {
  tol.validate();
  if (n < 1) throw DomainError("schott_harmonic_rate: harmonic must be >= 1");
  return harmonic_rate_impl(n, beam, tol);
}

double schott_continuum_rate(double nu, const BeamParams& beam, const Tolerance& tol) {
  tol.validate();
  if (!(nu >= kUniformBesselOrder)) throw RangeError("schott_continuum_rate: nu below the uniform range");
  return harmonic_rate_impl(nu, beam, tol);
}

HarmonicTotal sum_over_harmonics(const std::function<double(double)>& per_harmonic, const BeamParams& beam,
                                 const Tolerance& tol, double cap, const std::function<double(double)>& bound) {
  tol.validate();
  if (cap <= 0.0) cap = 50.0 * beam.gamma * beam.gamma * beam.gamma;
  cap = std::max(cap, 1.0);
  const int n_explicit = static_cast<int>(std::min<double>(kExplicitHarmonics, std::floor(cap)));
  const numerics::SeriesResult s =
      numerics::harmonic_sum_partial([&](int n) { return per_harmonic(n); }, tol, n_explicit, 4,
                                     std::min(1.0, 1e3 * tol.rel),
                                     bound ? std::function<double(int)>([&](int n) { return bound(n); })
                                           : std::function<double(int)>());
  HarmonicTotal out;
  out.explicit_terms = s.terms;
  if (s.converged) {
    out.value = s.value;
    out.error = s.error;
    return out;
  }
  if (n_explicit >= cap) {
    throw ConvergenceError("harmonic sum: cap reached before convergence", s.value, s.error);
  }
  const double a = n_explicit + 0.5;
  const double b = cap + 0.5;
  std::vector<double> br;
  for (double x = a; x < b; x *= 1.5) br.push_back(x);
  br.push_back(b);
  const Tolerance ttol{tol.rel, 0.1 * tol.rel * std::abs(s.partial_sum)};
  const Integration<double> tail = integrate_panels<double>(per_harmonic, br, ttol);
  if (!tail.converged) {
    throw ConvergenceError("harmonic sum: continuum tail did not converge", s.partial_sum + tail.value, tail.error);
  }
  out.continuum = tail.value;
  out.value = s.partial_sum + tail.value;
  out.error = tail.error;
  return out;
}

namespace {

double harmonic_total(const BeamParams& beam, const Tolerance& tol, bool energy_weighted) {
  beam.validate();
  tol.validate();
  if (beam.beta == 0.0) return 0.0;
  const Tolerance inner = inner_tolerance(tol);
  auto term = [&](double nu) {
    const double r = harmonic_rate_impl(nu, beam, inner);
    return energy_weighted ? nu * beam.omega0 * r : r;
  };
  return sum_over_harmonics(term, beam, tol).value;
}

}  // namespace

double total_power(const BeamParams& beam, const Tolerance& tol) { return harmonic_total(beam, tol, true); }

double total_photon_rate(const BeamParams& beam, const Tolerance& tol) { return harmonic_total(beam, tol, false); }

double classical_power(const BeamParams& beam) {
  const double b2 = beam.beta * beam.beta;
  const double g2 = beam.gamma * beam.gamma;
  return 2.0 / 3.0 * beam.Z * beam.Z * c * b2 * b2 * g2 * g2 / (beam.R * beam.R);
}

Vec3 momentum_loss_rate(const BeamParams& beam, const Tolerance& tol, double t) {
  beam.validate();
  tol.validate();
  const double beta = beam.beta;
  if (beta == 0.0) return {};
  const double bdot = beam.v0 * beam.v0 / (beam.R * c);
  const double one_m_b2 = 1.0 / (beam.gamma * beam.gamma);
  // Lienard distribution integrated over azimuth about the velocity; y = 1 - cos(angle to v).
  auto f = [&](double y) {
    const double x = 1.0 - y;
    const double d = one_m_b2 / (1.0 + beta) + beta * y;  // 1 - beta x without cancellation
    const double num = d * d - 0.5 * one_m_b2 * y * (2.0 - y);
    return x * num / (d * d * d * d * d);
  };
  const double w = std::min(1.0, 0.25 * one_m_b2);
  const Integration<double> r = integrate_panels<double>(f, numerics::geometric_breaks(0.0, 2.0, w), tol);
  if (!r.converged) throw ConvergenceError("momentum_loss_rate: quadrature did not converge", r.value, r.error);
  const double mag = beam.Z * beam.Z / (4.0 * kPi * c) * 2.0 * kPi * bdot * bdot * r.value / c;
  const double ph = beam.omega0 * t;
  return Vec3{std::cos(ph), std::sin(ph), 0.0} * mag;
}

SpectralTable spectral_table(const BeamParams& beam, const std::vector<int>& harmonics,
                             const std::vector<double>& thetas, int threads) {
  beam.validate();
  SpectralTable rows(harmonics.size() * thetas.size());
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    const int n = harmonics[i / thetas.size()];
    const double th = thetas[i % thetas.size()];
    rows[i] = {n, th, schott_angular_rate(n, th, beam)};
  });
  return rows;
}

// ---------------------------------------------------------------------------

BendGeometry bend_geometry(const BeamParams& beam, double bend) {
  beam.validate();
  if (!(bend > 0.0 && bend < kPi)) throw DomainError("bend: angle must lie in (0, pi)");
  if (beam.beta == 0.0) throw DomainError("bend: particle at rest");
  BendGeometry g;
  g.bend = bend;
  g.T = bend / beam.omega0;
  g.v_in = Vec3{std::cos(-bend / 2.0), std::sin(-bend / 2.0), 0.0} * beam.v0;
  g.v_out = Vec3{std::cos(bend / 2.0), std::sin(bend / 2.0), 0.0} * beam.v0;
  return g;
}

double bend_photon_number(const BeamParams& beam, double bend, const PhotonMode& mode, const Tolerance& tol) {
  mode.validate();
  tol.validate();
  const BendGeometry g = bend_geometry(beam, bend);
  const Vec3 e = mode.polarization();
  const Vec3 q = mode.q;
  const double w = mode.omega();
  const double R = beam.R;
  const double phi0 = -bend / 2.0;
  auto arc_r = [&](double s) {
    const double ph = phi0 + beam.omega0 * s;
    return Vec3{R * (std::sin(ph) - std::sin(phi0)), R * (std::cos(phi0) - std::cos(ph)), 0.0};
  };
  auto f = [&](double s) {
    const double ph = phi0 + beam.omega0 * s;
    const double proj = beam.v0 * (e.x * std::cos(ph) + e.y * std::sin(ph));
    const double phase = w * s - dot(q, arc_r(s));
    return cplx(proj * std::cos(phase), proj * std::sin(phase));
  };
  const Integration<cplx> arc = integrate_panels<cplx>(f, phase_breaks(0.0, g.T, 2.0 * w, "bend_photon_number"), tol);
  if (!arc.converged) throw ConvergenceError("bend_photon_number: arc quadrature did not converge", 0.0, arc.error);
  const double d_in = w - dot(q, g.v_in);
  const double d_out = w - dot(q, g.v_out);
  const cplx entry = cplx(0.0, -1.0) * dot(e, g.v_in) / d_in;
  const double ph_exit = w * g.T - dot(q, arc_r(g.T));
  const cplx exit = cplx(std::cos(ph_exit), std::sin(ph_exit)) * cplx(0.0, 1.0) * dot(e, g.v_out) / d_out;
  const cplx total = entry + arc.value + exit;
  return beam.Z * beam.Z / (c * c) * mode.coupling_sq() * std::norm(total);
}

}  // namespace synchrad
