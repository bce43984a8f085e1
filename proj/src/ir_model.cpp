#include "synchrad/ir_model.hpp"

#include <algorithm>
#include <cmath>

#include "synchrad/errors.hpp"
#include "synchrad/quadrature.hpp"

namespace synchrad {

using numerics::Integration;
using numerics::integrate_panels;
using numerics::kPi;

namespace {

constexpr double c = kSpeedOfLight;

double gamma_of(double v) {
  const double b = v / c;
  return 1.0 / std::sqrt((1.0 - b) * (1.0 + b));
}

// Breaks in y = 1 - cos(angle to v) resolving the 1/gamma^2 forward peak.
std::vector<double> forward_breaks(double v) {
  const double g = gamma_of(v);
  return numerics::geometric_breaks(0.0, 2.0, std::min(0.5, 0.25 / (g * g)));
}

}  // namespace

void VelocityJump::validate() const {
  if (!(norm(v1) < c) || !(norm(v2) < c)) throw DomainError("velocity jump: speeds must be below c");
  if (!(t3 > 0.0)) throw DomainError("velocity jump: t3 must be positive");
  if (!(tau_in >= 0.0 && tau_in < t3)) throw DomainError("velocity jump: need 0 <= tau_in < t3");
  if (!(q_c > 0.0)) throw DomainError("velocity jump: q_c must be positive");
  if (!std::isfinite(Z)) throw DomainError("velocity jump: Z must be finite");
}

bool VelocityJump::large_jump() const {
  const double a = norm(v1);
  return a == 0.0 || norm(v2 - v1) > 0.3 * a;
}

double jump_lambda(const VelocityJump& jump) {
  const double a2 = dot(jump.v1, jump.v1);
  if (a2 == 0.0) throw DomainError("jump_lambda: v1 = 0");
  return dot(jump.v1, jump.v2 - jump.v1) / a2;
}

Trajectory jump_trajectory(const VelocityJump& jump, double t_end) {
  jump.validate();
  const VelocityJump j = jump;
  Trajectory tr;
  tr.r0 = [j](double t) { return t <= j.t3 ? j.v1 * t : j.v1 * j.t3 + j.v2 * (t - j.t3); };
  tr.v0 = [j](double t) { return t < j.t3 ? j.v1 : j.v2; };
  tr.t_begin = 0.0;
  tr.t_end = t_end;
  return tr;
}

double delta_shift(const VelocityJump& jump, const Tolerance& tol) {
  jump.validate();
  const double v = norm(jump.v1);
  if (v == 0.0) return 0.0;
  const double beta = v / c;
  const double g = gamma_of(v);
  // y = 1 - cos; 1 - beta cos = 1/(g^2 (1 + beta)) + beta y avoids cancellation.
  auto f = [&](double y) { return y * (2.0 - y) / (1.0 / (g * g * (1.0 + beta)) + beta * y); };
  const Integration<double> r = integrate_panels<double>(f, forward_breaks(v), tol);
  if (!r.converged) throw ConvergenceError("delta_shift: quadrature did not converge", r.value, r.error);
  const double angular = 2.0 * kPi * r.value / c;
  return jump.Z * jump.Z * v * v * jump.q_c / (2.0 * kPi * kPi * c) * angular;
}

double delta_shift_nonrel(const VelocityJump& jump) {
  const double v2 = dot(jump.v1, jump.v1);
  return 4.0 * jump.Z * jump.Z * v2 * jump.q_c / (3.0 * kPi * c * c);
}

double delta_shift_cross(const VelocityJump& jump, const Tolerance& tol) {
  const double a2 = dot(jump.v1, jump.v1);
  if (a2 == 0.0) return 0.0;
  return delta_shift(jump, tol) * dot(jump.v1, jump.v2) / a2;
}

namespace {

double two_pole(const VelocityJump& jump, const PhotonMode& mode, double d_plus, double d_minus) {
  mode.validate();
  const double w = mode.omega();
  const Vec3 e = mode.polarization();
  const double a = dot(e, jump.v2) / (w - dot(mode.q, jump.v2) + d_plus) -
                   dot(e, jump.v1) / (w - dot(mode.q, jump.v1) + d_minus);
  return jump.Z * jump.Z * mode.coupling_sq() / (c * c) * a * a;
}

}  // namespace

double soft_photon_number(const VelocityJump& jump, const PhotonMode& mode, double delta) {
  if (!(delta >= 0.0)) throw DomainError("soft_photon_number: delta must be >= 0");
  return two_pole(jump, mode, delta, delta);
}

double soft_photon_number(const VelocityJump& jump, const PhotonMode& mode) {
  return soft_photon_number(jump, mode, delta_shift(jump));
}

double full_photon_number(const VelocityJump& jump, const PhotonMode& mode, bool include_shifts) {
  if (!include_shifts) return two_pole(jump, mode, 0.0, 0.0);
  return two_pole(jump, mode, delta_shift_cross(jump), delta_shift(jump));
}

double soft_spectral_density(const VelocityJump& jump, double omega, double delta, const Tolerance& tol) {
  jump.validate();
  if (!(omega > 0.0)) throw DomainError("soft_spectral_density: omega must be positive");
  if (!(delta >= 0.0)) throw DomainError("soft_spectral_density: delta must be >= 0");
  if (norm(jump.v2 - jump.v1) == 0.0) return 0.0;
  const double vref = std::max(norm(jump.v1), norm(jump.v2));
  Vec3 axis = norm(jump.v1) > 0.0 ? normalized(jump.v1) : Vec3{0.0, 0.0, 1.0};
  const auto tb = transverse_basis(axis);
  const double qm = omega / c;
  // Polarization-summed photon number for direction n.
  auto number = [&](const Vec3& n) {
    const double d1 = omega - qm * dot(n, jump.v1) + delta;
    const double d2 = omega - qm * dot(n, jump.v2) + delta;
    const Vec3 a = jump.v2 * (1.0 / d2) - jump.v1 * (1.0 / d1);
    const double an = dot(n, a);
    return dot(a, a) - an * an;
  };
  auto outer = [&](double y) {
    const double u = 1.0 - y;
    const double s = std::sqrt(std::max(0.0, y * (2.0 - y)));
    auto inner = [&](double phi) {
      const Vec3 n = axis * u + tb[0] * (s * std::cos(phi)) + tb[1] * (s * std::sin(phi));
      return number(n);
    };
    const Integration<double> r = integrate_panels<double>(inner, numerics::uniform_breaks(0.0, 2.0 * kPi, 4),
                                                           Tolerance{0.1 * tol.rel, 0.0});
    return r.value;
  };
  const Integration<double> r = integrate_panels<double>(outer, forward_breaks(vref), tol);
  if (!r.converged) throw ConvergenceError("soft_spectral_density: quadrature did not converge", r.value, r.error);
  // Z^2 g^2/c^2 with g^2 = 2 pi c^2/w, times w^2/((2 pi)^3 c^3).
  const double pref = jump.Z * jump.Z * 2.0 * kPi / omega * omega * omega / (8.0 * kPi * kPi * kPi * c * c * c);
  return pref * r.value;
}

double soft_spectral_density(const VelocityJump& jump, double omega) {
  return soft_spectral_density(jump, omega, delta_shift(jump));
}

double soft_photon_total(const VelocityJump& jump, double omega_min, double omega_max, double delta,
                         const Tolerance& tol) {
  if (!(omega_min > 0.0 && omega_max > omega_min)) {
    throw DomainError("soft_photon_total: need 0 < omega_min < omega_max");
  }
  const double la = std::log(omega_min);
  const double lb = std::log(omega_max);
  auto f = [&](double x) {
    const double w = std::exp(x);
    return w * soft_spectral_density(jump, w, delta, Tolerance{0.01 * tol.rel, 0.0});
  };
  const int panels = std::max(1, static_cast<int>(std::ceil(lb - la)));
  std::vector<double> br = numerics::uniform_breaks(la, lb, panels);
  if (delta > omega_min && delta < omega_max) br = numerics::merge_breaks(br, {std::log(delta)});
  const Integration<double> r = integrate_panels<double>(f, br, tol);
  if (!r.converged) throw ConvergenceError("soft_photon_total: quadrature did not converge", r.value, r.error);
  return r.value;
}

}  // namespace synchrad
