#include "synchrad/corrections.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "synchrad/quadrature.hpp"

namespace synchrad {

using numerics::CompensatedSum;
using numerics::Integration;
using numerics::integrate_panels;
using numerics::kPi;
using cplx = std::complex<double>;

namespace {

constexpr double c = kSpeedOfLight;

struct ComplexSum {
  CompensatedSum re;
  CompensatedSum im;
  void add(cplx z) {
    re.add(z.real());
    im.add(z.imag());
  }
  cplx value() const { return {re.value(), im.value()}; }
};

// Gauss-Legendre nodes of order n mapped onto [a, b], appended.
void append_gl(double a, double b, int n, std::vector<double>& x, std::vector<double>& w) {
  const numerics::GaussRule g = numerics::gauss_legendre(n);
  const double h = 0.5 * (b - a);
  const double m = 0.5 * (a + b);
  for (int i = 0; i < n; ++i) {
    x.push_back(m + h * g.nodes[i]);
    w.push_back(h * g.weights[i]);
  }
}

}  // namespace

double mu_coupling(const Vec3& q, const Vec3& q_prime, double gamma) {
  if (!(gamma >= 1.0)) throw DomainError("mu_coupling: gamma must be >= 1");
  return -dot(q, q_prime) / gamma;
}

void ModeSum::validate() const {
  if (!(q_c > 0.0)) throw DomainError("mode sum: q_c must be positive");
  if (radial_nodes.empty() || radial_nodes.size() != radial_weights.size()) {
    throw DomainError("mode sum: radial grid empty or inconsistent");
  }
  if (polar_nodes.empty() || polar_nodes.size() != polar_weights.size()) {
    throw DomainError("mode sum: polar grid empty or inconsistent");
  }
  if (azimuthal < 1) throw DomainError("mode sum: azimuthal count must be positive");
  for (std::size_t i = 1; i < radial_nodes.size(); ++i) {
    if (!(radial_nodes[i] > radial_nodes[i - 1])) throw DomainError("mode sum: radial grid not increasing");
  }
  for (std::size_t i = 1; i < polar_nodes.size(); ++i) {
    if (!(polar_nodes[i] > polar_nodes[i - 1])) throw DomainError("mode sum: polar grid not increasing");
  }
  if (radial_nodes.back() > q_c * (1.0 + 1e-12) || radial_nodes.front() <= 0.0) {
    throw DomainError("mode sum: radial nodes must lie in (0, q_c]");
  }
}

ModeSum make_mode_sum(double q_c, double t_scale, int polar, int azimuthal) {
  if (!(q_c > 0.0)) throw DomainError("mode sum: q_c must be positive");
  if (!(t_scale > 0.0)) throw DomainError("mode sum: time scale must be positive");
  ModeSum m;
  m.q_c = q_c;
  m.azimuthal = azimuthal;
  const double q_lo = q_c * 1e-7;
  const double q_b = std::min(q_c, 2.0 * kPi / (c * t_scale));
  // Logarithmic part, GL in ln q'.
  if (q_b > q_lo) {
    const double la = std::log(q_lo);
    const double lb = std::log(q_b);
    const int panels = std::max(1, static_cast<int>(std::ceil(2.0 * (lb - la) / std::log(10.0))));
    std::vector<double> x;
    std::vector<double> w;
    for (int p = 0; p < panels; ++p) {
      append_gl(la + (lb - la) * p / panels, la + (lb - la) * (p + 1) / panels, 8, x, w);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double q = std::exp(x[i]);
      m.radial_nodes.push_back(q);
      m.radial_weights.push_back(w[i] * q * q * q);
    }
  }
  if (q_c > q_b) {
    const int panels = static_cast<int>(std::ceil((q_c - q_b) * c * t_scale * 2.0 / kPi));
    if (panels > 4000) throw DomainError("mode sum: time scale too long for the radial grid");
    std::vector<double> x;
    std::vector<double> w;
    for (int p = 0; p < panels; ++p) {
      append_gl(q_b + (q_c - q_b) * p / panels, q_b + (q_c - q_b) * (p + 1) / panels, 8, x, w);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      m.radial_nodes.push_back(x[i]);
      m.radial_weights.push_back(w[i] * x[i] * x[i]);
    }
  }
  const numerics::GaussRule g = numerics::gauss_legendre(polar);
  m.polar_nodes = g.nodes;
  m.polar_weights = g.weights;
  m.validate();
  return m;
}

AmplitudeFn adiabatic_uniform_amplitudes(const Vec3& v, double Z) {
  if (!(norm(v) < c)) throw DomainError("amplitudes: speed reaches c");
  return [v, Z](int beta, const Vec3& qp, double t) {
    const PhotonMode mode{beta, qp};
    const double d = mode.omega() - dot(qp, v);
    const double amp = Z / c * std::sqrt(mode.coupling_sq()) * dot(mode.polarization(), v) / d;
    return amp * cplx(std::cos(d * t), std::sin(d * t));
  };
}

PExponent p_general(const Vec3& q, const AmplitudeFn& amplitudes, const ModeSum& modes, double gamma, double t1,
                    double t2, const POptions& options) {
  modes.validate();
  PExponent out;
  out.t1 = t1;
  out.t2 = t2;
  if (t1 == t2) return out;
  ComplexSum total;
  ComplexSum top;
  const double tmin = std::min(std::abs(t1), std::abs(t2));
  const double dphi = 2.0 * kPi / modes.azimuthal;
  const double norm_measure = 1.0 / (8.0 * kPi * kPi * kPi);
  for (std::size_t ir = 0; ir < modes.radial_nodes.size(); ++ir) {
    const double qp = modes.radial_nodes[ir];
    const bool in_top = qp >= 0.5 * modes.q_c;
    for (std::size_t ip = 0; ip < modes.polar_nodes.size(); ++ip) {
      const double ct = modes.polar_nodes[ip];
      const double st = std::sqrt((1.0 - ct) * (1.0 + ct));
      for (int ia = 0; ia < modes.azimuthal; ++ia) {
        const double ph = (ia + 0.5) * dphi;
        const Vec3 n{st * std::cos(ph), st * std::sin(ph), ct};
        const Vec3 qv = n * qp;
        // mu stops growing beyond the cutoff.
        const double mu = mu_coupling(q, n * std::min(qp, modes.q_c), gamma);
        const double weight = modes.radial_weights[ir] * modes.polar_weights[ip] * dphi * norm_measure;
        for (int beta = 1; beta <= 2; ++beta) {
          const cplx a1 = amplitudes(beta, qv, t1);
          const cplx a2 = amplitudes(beta, qv, t2);
          cplx term;
          if (std::abs(mu) * tmin > options.drop_threshold) {
            const double d = -mu * (t1 - t2);
            term = std::norm(a1) + std::norm(a2) - std::conj(a1) * a2 * (1.0 + cplx(std::cos(d), std::sin(d)));
          } else {
            const cplx f1 = 1.0 - cplx(std::cos(mu * t1), -std::sin(mu * t1));
            const cplx f2 = 1.0 - cplx(std::cos(mu * t2), std::sin(mu * t2));
            term = std::norm(a1) * f1 + std::norm(a2) * f2 - std::conj(a1) * a2 * f1 * f2;
          }
          total.add(weight * term);
          if (in_top) top.add(weight * term);
        }
      }
    }
  }
  out.value = total.value();
  out.uv_warning = std::abs(top.value()) > 0.1 * std::abs(out.value);
  return out;
}

namespace {

struct VelocityFrame {
  Vec3 e1;
  Vec3 e2;
  Vec3 e3;  // along v
};

VelocityFrame frame_along(const Vec3& v) {
  const Vec3 e3 = normalized(v);
  const auto b = transverse_basis(e3);
  return {b[0], b[1], e3};
}

double angular_integral(const Vec3& v0, const Tolerance& tol, const std::function<double(double u, double phi)>& g,
                        double gamma_v, bool depends_on_phi) {
  // u = cos of the angle to v; the weight (1 - u^2)/(1 - beta u)^2 peaks near u = 1 on the scale 1/gamma^2.
  const double beta = norm(v0) / c;
  // Trapezoid in phi, spectrally accurate for the smooth periodic integrand; doubled until settled.
  auto periodic_mean = [&](double u) {
    if (!depends_on_phi) return 2.0 * kPi * g(u, 0.0);
    int m = 8;
    double sum = 0.0;
    for (int i = 0; i < m; ++i) sum += g(u, 2.0 * kPi * i / m);
    double prev = 2.0 * kPi * sum / m;
    while (m < 4096) {
      for (int i = 0; i < m; ++i) sum += g(u, 2.0 * kPi * (i + 0.5) / m);
      m *= 2;
      const double cur = 2.0 * kPi * sum / m;
      if (std::abs(cur - prev) <= 0.1 * tol.rel * std::abs(cur)) return cur;
      prev = cur;
    }
    return prev;
  };
  auto outer = [&](double y) {
    const double u = 1.0 - y;
    const double d = 1.0 / (gamma_v * gamma_v * (1.0 + beta)) + beta * y;  // 1 - beta u
    const double s2 = y * (2.0 - y);
    return s2 / (d * d) * periodic_mean(u);
  };
  const double w = std::min(0.5, 0.25 / (gamma_v * gamma_v));
  const Integration<double> r = integrate_panels<double>(outer, numerics::geometric_breaks(0.0, 2.0, w), tol);
  if (!r.converged) throw ConvergenceError("p_const_velocity: angular quadrature did not converge", r.value, r.error);
  return r.value;
}

}  // namespace

double p_angular_coefficient(const Vec3& v0, double Z, const Tolerance& tol) {
  const double v = norm(v0);
  if (v == 0.0) return 0.0;
  if (!(v < c)) throw DomainError("p_angular_coefficient: speed reaches c");
  const double beta = v / c;
  const double gv = 1.0 / std::sqrt((1.0 - beta) * (1.0 + beta));
  auto f = [&](double y) {
    const double d = 1.0 / (gv * gv * (1.0 + beta)) + beta * y;
    return y * (2.0 - y) / (d * d);
  };
  const double w = std::min(0.5, 0.25 / (gv * gv));
  const Integration<double> r = integrate_panels<double>(f, numerics::geometric_breaks(0.0, 2.0, w), tol);
  return Z * Z / (4.0 * kPi * kPi * c * c * c) * 2.0 * kPi * v * v * r.value;
}

PExponent p_const_velocity(const Vec3& v0, const Vec3& q, double q_c, double gamma, double Z, double t1, double t2,
                           const Tolerance& tol) {
  tol.validate();
  if (!(q_c > 0.0)) throw DomainError("p_const_velocity: q_c must be positive");
  if (!(gamma >= 1.0)) throw DomainError("p_const_velocity: gamma must be >= 1");
  PExponent out;
  out.t1 = t1;
  out.t2 = t2;
  const double v = norm(v0);
  if (!(v < c)) throw DomainError("p_const_velocity: speed reaches c");
  if (t1 == t2 || v == 0.0) return out;
  const double D = t1 - t2;
  const double beta = v / c;
  const double gv = 1.0 / std::sqrt((1.0 - beta) * (1.0 + beta));
  const VelocityFrame fr = frame_along(v0);
  const double q1 = dot(q, fr.e1);
  const double q2 = dot(q, fr.e2);
  const double q3 = dot(q, fr.e3);
  auto bracket = [&](double u, double phi, bool imag) {
    const double s = std::sqrt(std::max(0.0, (1.0 - u) * (1.0 + u)));
    const double nq = s * std::cos(phi) * q1 + s * std::sin(phi) * q2 + u * q3;
    const double w1 = q_c * nq / gamma;
    const double w2 = (c - v * u) * q_c;
    const double w12 = w2 + w1;
    if (imag) return numerics::sin_integral(w2 * D) + numerics::sin_integral(w12 * D);
    return numerics::cos_integral_entire(w2 * D) + numerics::cos_integral_entire(w12 * D);
  };
  const bool phi_dep = q1 != 0.0 || q2 != 0.0;
  const double re = angular_integral(v0, tol, [&](double u, double phi) { return bracket(u, phi, false); }, gv, phi_dep);
  const double im = angular_integral(v0, tol, [&](double u, double phi) { return bracket(u, phi, true); }, gv, phi_dep);
  const double pref = Z * Z / (4.0 * kPi * kPi * c * c * c) * v * v;
  out.value = pref * cplx(re, im);
  return out;
}

cplx p_nonrel_asymptotic(double v0_mag, double Z, double q_c, double dt) {
  if (dt == 0.0) throw DomainError("p_nonrel_asymptotic: dt = 0 is outside the asymptotic regime");
  if (!(q_c > 0.0)) throw DomainError("p_nonrel_asymptotic: q_c must be positive");
  const double pref = 2.0 * Z * Z * v0_mag * v0_mag / (3.0 * kPi * c * c * c);
  const double sgn = dt > 0.0 ? 1.0 : -1.0;
  return pref * cplx(2.0 * (numerics::kEulerGamma + std::log(c * q_c) + std::log(std::abs(dt))), kPi * sgn);
}

PTable::PTable(const Vec3& v0, const Vec3& q, double q_c, double gamma, double Z, double d_min, double d_max,
               int points)
    : v0_(v0), q_(q), q_c_(q_c), gamma_(gamma), Z_(Z) {
  if (!(d_min > 0.0 && d_max > d_min) || points < 2) throw DomainError("PTable: need 0 < d_min < d_max, points >= 2");
  ln_min_ = std::log(d_min);
  ln_step_ = (std::log(d_max) - ln_min_) / (points - 1);
  values_.resize(points);
  for (int i = 0; i < points; ++i) {
    const double d = std::exp(ln_min_ + ln_step_ * i);
    values_[i] = p_const_velocity(v0, q, q_c, gamma, Z, d, 0.0).value;
  }
  exact_min_ = values_.front();
}

cplx PTable::operator()(double t1, double t2) const {
  const double D = t1 - t2;
  if (D == 0.0) return {0.0, 0.0};
  const double a = std::abs(D);
  cplx v;
  const double x = (std::log(a) - ln_min_) / ln_step_;
  if (x < 0.0) {
    // Below the table P grows linearly from 0.
    v = exact_min_ * (a / std::exp(ln_min_));
  } else if (x >= static_cast<double>(values_.size() - 1)) {
    v = p_const_velocity(v0_, q_, q_c_, gamma_, Z_, a, 0.0).value;
  } else {
    const auto i = static_cast<std::size_t>(x);
    const double f = x - static_cast<double>(i);
    v = values_[i] * (1.0 - f) + values_[i + 1] * f;
  }
  return D > 0.0 ? v : std::conj(v);
}

CorrectedResult corrected_photon_number(const Trajectory& traj, const PhotonMode& mode, double t, double Z,
                                        const PProvider& p, const CorrectedOptions& options) {
  mode.validate();
  if (!(t > 0.0)) throw DomainError("corrected_photon_number: t must be positive");
  if (traj.t_begin > 0.0 || traj.t_end < t) throw DomainError("corrected_photon_number: trajectory must cover [0, t]");
  if (options.tau_in < 0.0 || options.tau_out < 0.0) {
    throw DomainError("corrected_photon_number: switch times must be >= 0");
  }
  const double w = mode.omega();
  const int panels = std::max(options.min_panels, static_cast<int>(std::ceil(2.0 * w * t / kPi)));
  std::vector<double> br = numerics::uniform_breaks(0.0, t, panels);
  if (options.tau_in > 0.0) br = numerics::merge_breaks(br, numerics::geometric_breaks(0.0, t, options.tau_in / 4.0));
  if (options.tau_out > 0.0) {
    std::vector<double> g = numerics::geometric_breaks(0.0, t, options.tau_out / 4.0);
    for (double& b : g) b = t - b;
    std::reverse(g.begin(), g.end());
    br = numerics::merge_breaks(br, g);
  }
  std::vector<double> x;
  std::vector<double> wt;
  for (std::size_t i = 0; i + 1 < br.size(); ++i) append_gl(br[i], br[i + 1], options.nodes_per_panel, x, wt);
  if (static_cast<int>(x.size()) > options.max_nodes) {
    throw ConvergenceError("corrected_photon_number: too many time nodes for the mode frequency", 0.0,
                           std::numeric_limits<double>::infinity());
  }
  const Vec3 e = mode.polarization();
  const double pref = Z / c * std::sqrt(mode.coupling_sq());
  std::vector<cplx> a(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double s = x[i];
    double sw = options.tau_in > 0.0 ? -std::expm1(-s / options.tau_in) : 1.0;
    if (options.tau_out > 0.0) sw *= -std::expm1(-(t - s) / options.tau_out);
    const double phase = w * s - dot(mode.q, traj.r0(s));
    a[i] = wt[i] * pref * sw * dot(e, traj.v0(s)) * cplx(-std::sin(phase), std::cos(phase));
  }
  ComplexSum total;
  if (!p) {
    ComplexSum amp;
    for (const cplx& ai : a) amp.add(ai);
    total.add(std::norm(amp.value()));
  } else {
    for (std::size_t i = 0; i < a.size(); ++i) {
      ComplexSum row;
      for (std::size_t j = 0; j < a.size(); ++j) row.add(a[j] * std::exp(-p(x[i], x[j])));
      total.add(std::conj(a[i]) * row.value());
    }
  }
  const cplx v = total.value();
  return {v.real(), std::abs(v.imag())};
}

double packet_average(const Vec3& k0, double delta_l, double delta_perp, int order,
                      const std::function<double(const Vec3& v)>& f) {
  if (!(delta_l > 0.0) || !(delta_perp > 0.0)) throw DomainError("packet_average: widths must be positive");
  const numerics::GaussRule g = numerics::gauss_hermite_normal(order);
  Vec3 el{0.0, 0.0, 1.0};
  if (norm(k0) > 0.0) el = normalized(k0);
  const auto tb = transverse_basis(el);
  CompensatedSum sum;
  for (int i = 0; i < order; ++i) {
    for (int j = 0; j < order; ++j) {
      for (int k = 0; k < order; ++k) {
        const Vec3 kk = k0 + el * (g.nodes[i] / delta_l) + tb[0] * (g.nodes[j] / delta_perp) +
                        tb[1] * (g.nodes[k] / delta_perp);
        const Vec3 v = kk * (c / std::sqrt(c * c + dot(kk, kk)));
        sum.add(g.weights[i] * g.weights[j] * g.weights[k] * f(v));
      }
    }
  }
  return sum.value();
}

}  // namespace synchrad
