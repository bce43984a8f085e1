#pragma once

#include "synchrad/semiclassical.hpp"

namespace synchrad {

/// A charge moving with v1 that switches on over tau_in after t = 0 and
/// jumps to v2 at t3. r(t) = v1 t up to t3, then v1 t3 + v2 (t - t3).
struct VelocityJump {
  Vec3 v1;
  Vec3 v2;
  double t3 = 1.0;
  double tau_in = 0.0;
  double q_c = kSpeedOfLight;
  double Z = 1.0;

  /// |v1|, |v2| < c, t3 > 0, 0 <= tau_in < t3, q_c > 0. Throws DomainError.
  void validate() const;
  /// |v2 - v1| / |v1| above 0.3: the small-jump treatment is doubtful.
  bool large_jump() const;
};

/// lambda = v1.(v2 - v1)/v1^2, the expansion parameter of the neglected
/// continuous terms.
double jump_lambda(const VelocityJump& jump);

Trajectory jump_trajectory(const VelocityJump& jump, double t_end);

/// Level shift
/// Delta = 2 Z^2/c^2 sum_q' g'^2 [q' x v1]^2 / (q'^2 (w' - q'.v1)), |q'| <= q_c,
/// = Z^2 v1^2 q_c/(2 pi^2 c) * integral dOmega' sin^2/(c - v1 cos).
double delta_shift(const VelocityJump& jump, const Tolerance& tol = {1e-12, 0.0});

/// Nonrelativistic closed form 4 Z^2 v1^2 q_c / (3 pi c^2).
double delta_shift_nonrel(const VelocityJump& jump);

/// Shift on the post-jump side, the same sum with [q' x v1].[q' x v2].
/// The angular integral reduces exactly to delta_shift * v1.v2 / v1^2.
double delta_shift_cross(const VelocityJump& jump, const Tolerance& tol = {1e-12, 0.0});

/// Z^2 g^2/c^2 |e.v2/(w - q.v2 + delta) - e.v1/(w - q.v1 + delta)|^2.
/// delta = 0 is the classical two-pole formula.
double soft_photon_number(const VelocityJump& jump, const PhotonMode& mode, double delta);
double soft_photon_number(const VelocityJump& jump, const PhotonMode& mode);

/// Photon number with the two one-sided shifts kept separately:
/// Z^2 g^2/c^2 |e.v2/(w - q.v2 + delta_plus) - e.v1/(w - q.v1 + delta_minus)|^2,
/// delta_plus = delta_shift_cross, delta_minus = delta_shift. First-order-in-q
/// remainders of the one-sided derivatives are not included. With
/// include_shifts = false both shifts are 0.
double full_photon_number(const VelocityJump& jump, const PhotonMode& mode, bool include_shifts = true);

/// dN/dw = integral dOmega sum_alpha w^2/((2 pi)^3 c^3) n(w, Omega).
double soft_spectral_density(const VelocityJump& jump, double omega, double delta,
                             const Tolerance& tol = {1e-9, 0.0});
double soft_spectral_density(const VelocityJump& jump, double omega);

/// Integral of soft_spectral_density over [omega_min, omega_max].
double soft_photon_total(const VelocityJump& jump, double omega_min, double omega_max, double delta,
                         const Tolerance& tol = {1e-8, 0.0});

}  // namespace synchrad
