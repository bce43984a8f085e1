// Acceptance checks. Prints one PASS/FAIL line per criterion; with
// --criterion k only that one runs and the exit status reflects it.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oracles.hpp"
#include "synchrad/corrections.hpp"
#include "synchrad/decoherence.hpp"
#include "synchrad/ir_model.hpp"
#include "synchrad/numerics.hpp"
#include "synchrad/packets.hpp"
#include "synchrad/semiclassical.hpp"

using namespace synchrad;
using numerics::kPi;

namespace {

constexpr double c = kSpeedOfLight;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void info(const std::string& what) { notes.push_back("info " + what); }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / x.size();
    my += y[i] / y.size();
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

VelocityJump benchmark_jump() {
  VelocityJump j;
  j.v1 = {0.1 * c, 0, 0};
  j.v2 = Vec3{0.95, 0.05, 0.0} * (0.1 * c);
  j.t3 = 20.0;
  j.tau_in = 2.0;
  j.q_c = c;
  return j;
}

Outcome power_balance() {
  Outcome o;
  for (double g : {1.01, 2.0, 10.0}) {
    const BeamParams b = beam_from_gamma(g, 1000.0);
    const auto t0 = std::chrono::steady_clock::now();
    const double p = total_power(b, {1e-8, 0.0});
    const double dt = seconds_since(t0);
    const double ref = oracle::larmor_power(g, 1000.0);
    o.require(std::abs(p / ref - 1.0) <= 0.01, fmt("gamma %g: harmonic sum / closed form - 1 = %.3e", g, p / ref - 1.0));
    o.require(dt <= 60.0, fmt("gamma %g: %.2f s", g, dt));
  }
  return o;
}

Outcome infrared_slope() {
  Outcome o;
  const BeamParams b = beam_from_gamma(10.0, 1000.0);
  std::vector<double> lx, ly;
  for (int i = 0; i <= 10; ++i) {
    const double w = std::pow(10.0, -3.0 + 0.2 * i) * 1000.0 * b.omega0;
    double n = 0.0;
    for (int a = 1; a <= 2; ++a) n += bend_photon_number(b, 0.01, PhotonMode{a, {w / c, 0, 0}});
    lx.push_back(std::log(w));
    ly.push_back(std::log(n));
  }
  const double s = fit_slope(lx, ly);
  o.require(std::abs(s + 3.0) <= 0.05, fmt("log-log slope over two decades = %.4f", s));
  return o;
}

Outcome level_shift() {
  Outcome o;
  const VelocityJump j = benchmark_jump();
  const double d = delta_shift(j);
  const double closed = 4.0 * norm(j.v1) * norm(j.v1) * j.q_c / (3.0 * kPi * c * c);
  o.require(std::abs(d / closed - 1.0) <= 0.005, fmt("beta 0.1: numeric / closed form - 1 = %.3e", d / closed - 1.0));
  o.require(std::abs(d / oracle::level_shift(0.1, c) - 1.0) <= 1e-9, "numeric shift equals the quadrature oracle");
  return o;
}

Outcome infrared_dichotomy() {
  Outcome o;
  const VelocityJump j = benchmark_jump();
  const double d = delta_shift(j);
  std::vector<double> with, without, lx;
  for (double f : {1e-2, 5e-3, 2.5e-3, 1.25e-3}) {
    with.push_back(soft_photon_total(j, f * d, 10.0 * d, d));
    without.push_back(soft_photon_total(j, f * d, 10.0 * d, 0.0));
    lx.push_back(std::log(1.0 / f));
  }
  double worst = 0.0;
  for (std::size_t i = 1; i < with.size(); ++i) worst = std::max(worst, std::abs(with[i] / with[i - 1] - 1.0));
  o.require(worst < 0.01, fmt("shift > 0: largest change per halving of w_min = %.3e", worst));
  std::vector<double> slopes;
  for (std::size_t i = 1; i < without.size(); ++i) slopes.push_back((without[i] - without[i - 1]) / (lx[i] - lx[i - 1]));
  double spread = 0.0;
  for (double s : slopes) spread = std::max(spread, std::abs(s / slopes.front() - 1.0));
  o.require(slopes.front() > 0.0 && spread <= 0.03,
            fmt("shift = 0: slope in ln(1/w_min) = %.6e, spread %.3e", slopes.front(), spread));
  return o;
}

Outcome exponent_properties() {
  Outcome o;
  const double beta = 0.1;
  const Vec3 v{beta * c, 0, 0};
  const double g = 1.0 / std::sqrt(1.0 - beta * beta);
  const Vec3 q{0.3, 0.2, 0.1};
  const ModeSum ms = make_mode_sum(1.0, 0.05, 12, 8);
  const AmplitudeFn amp = adiabatic_uniform_amplitudes(v, 1.0);

  const double same_gen = std::abs(p_general(q, amp, ms, g, 2.0, 2.0).value);
  const double same_cls = std::abs(p_const_velocity(v, q, 1.0, g, 1.0, 2.0, 2.0).value);
  o.require(same_gen <= 1e-12 && same_cls <= 1e-12, fmt("|P(t,t)| = %.1e (mode sum), %.1e (closed)", same_gen, same_cls));

  double herm = 0.0;
  for (auto [t1, t2] : {std::pair{1.0, 1.3}, std::pair{0.2, 2.5}}) {
    const auto a = p_general(q, amp, ms, g, t1, t2).value;
    const auto b = p_general(q, amp, ms, g, t2, t1).value;
    herm = std::max(herm, std::abs(a - std::conj(b)) / std::abs(a));
    const auto ca = p_const_velocity(v, q, 1.0, g, 1.0, t1, t2).value;
    const auto cb = p_const_velocity(v, q, 1.0, g, 1.0, t2, t1).value;
    herm = std::max(herm, std::abs(ca - std::conj(cb)) / std::abs(ca));
  }
  o.require(herm <= 1e-12, fmt("Hermitian symmetry residual %.1e", herm));

  const double q0 = std::abs(p_general({0, 0, 0}, amp, ms, g, 1.0, 1.5).value);
  const double small = std::abs(p_general(q * 1e-8, amp, ms, g, 1.0, 1.5).value);
  const double ref = std::abs(p_general(q, amp, ms, g, 1.0, 1.5).value);
  o.require(q0 == 0.0 && small <= 1e-6 * ref, fmt("q -> 0: P(0) = %.1e, P(1e-8 q)/P(q) = %.1e", q0, small / ref));

  double worst = 0.0;
  for (double q_c : {1.0, 3.0}) {
    for (double cqd : {100.0, 1e3, 1e4, 1e5}) {
      const double dt = cqd / (c * q_c);
      const auto p = p_const_velocity(v, q, q_c, g, 1.0, dt, 0.0).value;
      const auto a = p_nonrel_asymptotic(beta * c, 1.0, q_c, dt);
      worst = std::max(worst, std::abs(p.real() / a.real() - 1.0));
    }
  }
  o.require(worst <= 0.05, fmt("beta 0.1, c q_c dt in [1e2, 1e5]: largest |Re P / asymptote - 1| = %.3e", worst));
  return o;
}

Outcome damping_direction() {
  Outcome o;
  const double g = 1.0 / std::sqrt(1.0 - 0.01);
  bool all = true;
  auto sample = [&](double T, const Vec3& dir, double qm) {
    VelocityJump j = benchmark_jump();
    j.t3 = T / 2;
    j.tau_in = 20.0;
    const Trajectory tr = jump_trajectory(j, T);
    PhotonMode m{1, dir * (qm / c)};
    if (std::abs(dot(m.polarization(), j.v2 - j.v1)) < 1e-9 * c) m.alpha = 2;
    const PTable table(j.v1, m.q, j.q_c, g, 1.0, 1e-4, 2.0 * T);
    CorrectedOptions opt;
    opt.tau_in = 20.0;
    opt.tau_out = 20.0;
    const double semi = corrected_photon_number(tr, m, T, 1.0, nullptr, opt).value;
    const CorrectedResult corr =
        corrected_photon_number(tr, m, T, 1.0, [&](double a, double b) { return table(a, b); }, opt);
    const bool ok = corr.value <= semi;
    all = all && ok;
    o.notes.push_back(fmt("%s T %g, q = %.1f (%.1f, %.1f, %.1f)/c: semiclassical %.6e, corrected %.6e, ratio - 1 = %+.3e",
                          ok ? "ok  " : "FAIL", T, qm, dir.x, dir.y, dir.z, semi, corr.value, corr.value / semi - 1.0));
  };
  for (double T : {100.0, 200.0, 400.0}) sample(T, {0.6, 0.0, 0.8}, 1.0);
  for (const Vec3& dir : {Vec3{-0.6, 0.0, 0.8}, Vec3{0.0, 0.6, 0.8}}) sample(200.0, dir, 1.0);
  o.pass = all;
  if (!all) {
    o.info("exp(-P) damps the time correlation of the amplitudes, which broadens the line: the");
    o.info("transform of exp(-Re P) has a broad positive tail that picks up the large near-resonant");
    o.info("spectral weight of the long uniform segments, so off-resonant modes gain. The effect");
    o.info("persists with Im P removed and grows with T; it is a property of the exponent, not a sign slip.");
  }
  return o;
}

Outcome decoherence_identity() {
  Outcome o;
  for (double gam : {2.0, 10.0, 100.0}) {
    const BeamParams b = beam_from_gamma(gam, 1000.0);
    const double total = total_photon_rate(b);
    const double q1 = b.omega0 / c;
    for (Axis axis : {Axis::transverse, Axis::longitudinal}) {
      const AxisProfile p(b, axis);
      const double lim = p.s_rate(1e6 / q1);
      o.require(std::abs(lim / total - 1.0) <= 0.01,
                fmt("gamma %g %s: S(1e6/q1)/(t * photon rate) - 1 = %.2e", gam,
                    axis == Axis::transverse ? "transverse" : "longitudinal", lim / total - 1.0));
    }
    const double s0 = s_averaged(0.0, kPi / 2, 1e3, b);
    const double s0l = s_averaged(0.0, 0.0, 1e3, b);
    o.require(s0 == 0.0 && s0l == 0.0, fmt("gamma %g: S(0, t) = %g, %g", gam, s0, s0l));
  }
  const BeamParams b = beam_from_gamma(1000.0, 1000.0);
  const double qm = b.gamma * b.gamma * b.gamma * b.omega0 / c;
  for (double th : {0.0, kPi / 2}) {
    for (double x : {0.1, 1.0, 10.0}) {
      const double exact = s_averaged(x / qm, th, 1.0, b);
      const double airy = s_ultrarel(x / qm, th, 1.0, b, 0.1);
      o.require(std::abs(airy / exact - 1.0) <= 0.05,
                fmt("gamma 1000, theta0 %.4f, r q_max %g: Airy / harmonic sum - 1 = %.2e", th, x, airy / exact - 1.0));
    }
  }
  return o;
}

Outcome localization() {
  Outcome o;
  const BeamParams b = fian60_beam();
  const AxisProfile pt(b, Axis::transverse);
  const AxisProfile pl(b, Axis::longitudinal);
  double prev_t = std::numeric_limits<double>::infinity();
  double prev_l = prev_t;
  bool any_unbounded = false;
  for (double t : {1e8, 1e10, 1e12, 1e14}) {
    const double wt = localization_width(pt, t);
    const double wl = localization_width(pl, t);
    any_unbounded = any_unbounded || !std::isfinite(wt) || !std::isfinite(wl);
    o.require(wt <= prev_t && wl <= prev_l, fmt("t %.0e a.u.: widths do not grow (transverse %.6g, longitudinal %.6g bohr)", t, wt, wl));
    o.require(wl > wt, fmt("t %.0e a.u.: longitudinal > transverse (%.6g > %.6g)", t, wl, wt));
    prev_t = wt;
    prev_l = wl;
  }
  if (any_unbounded) {
    o.info(fmt("at t = 1e8 a.u. only N = %.2f photons have been emitted. The low-frequency spectrum", 1e8 * pt.rate()));
    o.info("(rate ~ w^(-2/3)) leaves N - S ~ r^(-1/3) at large r, so the background-subtracted kernel");
    o.info("has no finite rms width on either axis: both widths are unbounded and cannot be ordered.");
  }
  const double tc = localization_time(pt, 1.0, 1e8, 1e14);
  o.info(fmt("time for a 1 bohr transverse width: %.4g a.u. = %.4g s", tc, au_time_to_seconds(tc)));
  const PacketReport fixed = packet_report(b, false, 1e-6);
  const PacketReport poisson = packet_report(b, true);
  o.info(fmt("spreading time tau1: %.4g s with lambda = 1e-6, %.4g s with Poisson lambda = %.3g", fixed.tau1_s,
             poisson.tau1_s, poisson.lambda));
  return o;
}

Outcome packet_identity() {
  Outcome o;
  const BeamParams b = fian60_beam();
  const PacketWidths w = packet_widths(b);
  const double target = w.radial / std::sqrt(2.0);
  const double rel = std::abs(w.azimuthal_arc / target - 1.0);
  o.require(rel <= 1e-12, fmt("R dphi / (drho/sqrt 2) - 1 = %.6e", rel));
  if (rel > 1e-12) {
    const double alt = std::abs(w.azimuthal_arc / (w.radial / std::sqrt(b.beta)) - 1.0);
    o.info("with n1 = (gamma^2 - 1) c^2/(4 w_L), w_L = gamma w0/2, one gets n1 = gamma beta c R/2 and");
    o.info("drho^2 = 2R/(gamma c), so R^2/n1 = drho^2/beta: R dphi = drho/sqrt(beta), not drho/sqrt(2).");
    o.info(fmt("R dphi / (drho/sqrt(beta)) - 1 = %.1e; the two arcs differ by sqrt(2/beta) = %.8f", alt,
               std::sqrt(2.0 / b.beta)));
  }
  const double n1 = mean_principal_number(b);
  const double wl = larmor_frequency(b.H0);
  double worst = 0.0;
  for (double f : {1.0 - 1e-6, 1.0, 1.0 + 1e-6}) {
    LandauLevelState s;
    s.n1 = static_cast<std::int64_t>(std::llround(n1 * f));
    worst = std::max(worst, std::abs(level_spacing(s, b.H0) / (2.0 * wl / b.gamma) - 1.0));
  }
  o.require(worst <= 1e-6, fmt("level spacing / (2 w_L/gamma) - 1 near n1 = %.3g: %.2e", n1, worst));
  return o;
}

Outcome special_functions() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  auto rel = [](double got, double ref, double floor) { return std::abs(got - ref) / std::max(std::abs(ref), floor); };
  double bj = 0.0;
  for (int n = 0; n <= 50; ++n) {
    for (double x = -100.0; x <= 100.0; x += 1.37) bj = std::max(bj, rel(numerics::bessel_j(n, x), oracle::bessel_j(n, x), 1e-6));
  }
  o.require(bj < 1e-10, fmt("J_n, n <= 50, |x| <= 100: %.1e", bj));
  double bs = 0.0;
  for (int n : {0, 1, 4, 17, 50}) {
    for (double x : {1e-3, 0.1, 0.5, 2.0, 7.5}) bs = std::max(bs, rel(numerics::bessel_j(n, x), oracle::bessel_j_series(n, x), 1e-300));
  }
  o.require(bs < 1e-10, fmt("J_n against the power series: %.1e", bs));
  double bl = 0.0;
  for (int n : {300, 1000, 20000}) {
    for (double z : {0.3, 0.9, 0.999, 1.2}) {
      bl = std::max(bl, rel(numerics::bessel_j(n, z * n), oracle::bessel_j(n, z * n), 1e-3 * std::abs(oracle::bessel_j(n, n))));
    }
  }
  o.require(bl < 1e-9, fmt("J_n at orders 300 to 20000: %.1e", bl));
  double bu = 0.0;
  for (double nu : {256.0, 1000.0, 5000.0}) {
    for (double z : {0.5, 0.9, 0.99, 0.9999}) {
      const numerics::BesselPair u = numerics::bessel_j_uniform(nu, (1.0 - z) * (1.0 + z));
      const int n = static_cast<int>(nu);
      bu = std::max(bu, rel(u.j, oracle::bessel_j(n, nu * z), 1e-300));
      bu = std::max(bu, rel(u.jprime, oracle::bessel_j_prime(n, nu * z), 1e-300));
    }
  }
  o.require(bu < 1e-6, fmt("uniform expansion J_nu, J'_nu: %.1e", bu));
  double ap = 0.0;
  for (double x = 0.0; x <= 50.0; x += 0.173) {
    ap = std::max(ap, rel(numerics::airy_ai(x), oracle::airy_ai(x), 1e-300));
    ap = std::max(ap, rel(numerics::airy_ai_prime(x), oracle::airy_ai_prime(x), 1e-300));
  }
  o.require(ap < 1e-8, fmt("Ai, Ai' on [0, 50], relative: %.1e", ap));
  double an = 0.0;
  for (double x = -20.0; x < 0.0; x += 0.0731) {
    an = std::max(an, std::abs(numerics::airy_ai(x) - oracle::airy_ai(x)));
    an = std::max(an, std::abs(numerics::airy_ai_prime(x) - oracle::airy_ai_prime(x)) / std::max(1.0, std::sqrt(-x)));
  }
  o.require(an < 1e-8, fmt("Ai, Ai' on [-20, 0], absolute: %.1e", an));
  double sc = 0.0;
  for (double x = 1e-3; x <= 1000.0; x *= 1.17) {
    sc = std::max(sc, rel(numerics::sin_integral(x), oracle::si(x), 1e-300));
    sc = std::max(sc, rel(numerics::cos_integral(x), oracle::ci(x), 1e-300));
  }
  o.require(sc < 1e-10, fmt("Si, Ci on [1e-3, 1e3]: %.1e", sc));
  const double dt = seconds_since(t0);
  o.require(dt <= 120.0, fmt("suite time %.2f s", dt));
  return o;
}

struct Criterion {
  const char* title;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list{
      {"harmonic power sum equals the classical closed form", power_balance},
      {"low-frequency photon number falls as omega^-3", infrared_slope},
      {"numeric level shift equals its nonrelativistic closed form", level_shift},
      {"infrared finiteness with a shift, logarithmic growth without", infrared_dichotomy},
      {"P exponent properties", exponent_properties},
      {"photon interaction reduces the emitted number", damping_direction},
      {"decoherence exponent limits and Airy form", decoherence_identity},
      {"localization widths shrink and are elongated along the field", localization},
      {"packet arc identity and level spacing", packet_identity},
      {"special functions against independent oracles", special_functions},
  };
  return list;
}

bool run_one(int k) {
  const Criterion& cr = criteria()[k - 1];
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = cr.run();
  } catch (const std::exception& e) {
    o.pass = false;
    o.notes.push_back(std::string("FAIL exception: ") + e.what());
  }
  std::printf("criterion %d: %s  %s (%.1f s)\n", k, o.pass ? "PASS" : "FAIL", cr.title, seconds_since(t0));
  for (const std::string& n : o.notes) std::printf("    %s\n", n.c_str());
  std::fflush(stdout);
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  int only = 0;
  app.add_option("--criterion", only, "Run a single criterion")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);
  if (only > 0) return run_one(only) ? 0 : 1;
  bool all = true;
  for (int k = 1; k <= static_cast<int>(criteria().size()); ++k) all = run_one(k) && all;
  return all ? 0 : 1;
}
