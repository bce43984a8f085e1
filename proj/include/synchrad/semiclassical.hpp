#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "synchrad/numerics.hpp"
#include "synchrad/units.hpp"
#include "synchrad/vec3.hpp"

namespace synchrad {

using numerics::Tolerance;

/// Classical path of the emitter. Times may be infinite at either end.
struct Trajectory {
  std::function<Vec3(double)> r0;
  std::function<Vec3(double)> v0;
  double t_begin = 0.0;
  double t_end = 0.0;

  /// Checks |v0| < c and dr0/dt = v0 by central differences at a few
  /// sample times. Throws DomainError on failure.
  void validate() const;
};

/// Circular orbit in the xy plane, field along z:
/// r0(t) = R (sin w0 t, -cos w0 t, 0), v0(t) = R w0 (cos w0 t, sin w0 t, 0).
Trajectory circular_trajectory(const BeamParams& beam, double t_begin, double t_end);

/// Straight line r0(t) = r_at_zero + v t.
Trajectory uniform_trajectory(const Vec3& v, const Vec3& r_at_zero, double t_begin, double t_end);

struct PhotonMode {
  int alpha = 1;  // polarization index, 1 or 2
  Vec3 q;

  double omega() const { return kSpeedOfLight * norm(q); }
  /// g_q^2 = 2 pi c^2 / omega (unit quantization volume).
  double coupling_sq() const { return 2.0 * numerics::kPi * kSpeedOfLight * kSpeedOfLight / omega(); }
  Vec3 polarization() const { return transverse_basis(q)[alpha - 1]; }
  /// Throws DomainError unless alpha is 1 or 2 and |q| > 0.
  void validate() const;
};

/// Q(t) = i (Z/c) g_q * integral from traj.t_begin to t of e.v0 exp(i w t' - i q.r0) dt'.
/// The trajectory must start at a finite time.
std::complex<double> coupling_amplitude(const Trajectory& traj, const PhotonMode& mode, double t, double Z,
                                        const Tolerance& tol = {1e-10, 0.0});

/// |Q(t)|^2.
double mean_photon_number(const Trajectory& traj, const PhotonMode& mode, double t, double Z,
                          const Tolerance& tol = {1e-10, 0.0});

/// Integrand of the polarization-summed rate d/dt sum_alpha n at delay tau:
/// (Z/c)^2 g^2 [v1.v2 - (q^.v1)(q^.v2)] exp(i w tau - i q.(r1 - r2)),
/// with t1 = t - |tau|/2 + tau/2 and t2 = t - |tau|/2 - tau/2.
std::complex<double> rate_integrand(const Trajectory& traj, const Vec3& q, double t, double tau, double Z);

/// d/dt sum_alpha n at time t. The correlation integral over tau is damped
/// adiabatically by exp(-|tau|/window) and truncated at 40 windows (or at the
/// start of the trajectory). Throws ConvergenceError when the window holds too
/// many oscillation periods to resolve or the quadrature misses tolerance.
double rate_general(const Trajectory& traj, const Vec3& q, double t, double Z, double window,
                    const Tolerance& tol = {1e-8, 0.0});

// ---------------------------------------------------------------------------
// Period-averaged circular-orbit spectrum. theta is the polar angle from the
// field axis; u = cos(theta).

/// Below this order the exact Bessel functions are used, above it the
/// uniform asymptotic expansion.
inline constexpr double kUniformBesselOrder = 256.0;
/// Harmonics summed one by one before the remainder is integrated as a
/// continuum in the harmonic number.
inline constexpr int kExplicitHarmonics = 2048;

/// cot^2(theta) J_nu^2(nu beta sin theta) + beta^2 J_nu'^2(nu beta sin theta) at
/// u = cos(theta). Even in u. nu must be an integer below kUniformBesselOrder.
double schott_bracket(double nu, double u, const BeamParams& beam);

/// Breakpoints on u in [0, 1] adapted to the angular width of harmonic nu.
std::vector<double> schott_u_breaks(double nu, const BeamParams& beam);

/// dN_n/(dt dOmega) = Z^2 n w0/(2 pi c) * bracket. Finite limits at theta = 0, pi.
double schott_angular_rate(int n, double theta, const BeamParams& beam);

/// Photons per unit time in harmonic n (all directions, both polarizations).
double schott_harmonic_rate(int n, const BeamParams& beam, const Tolerance& tol = {1e-10, 0.0});
/// The same for a real harmonic number nu >= kUniformBesselOrder; RangeError below.
double schott_continuum_rate(double nu, const BeamParams& beam, const Tolerance& tol = {1e-10, 0.0});

struct HarmonicTotal {
  double value = 0.0;
  double error = 0.0;
  int explicit_terms = 0;
  double continuum = 0.0;  // part contributed by the continuum tail
};

/// Sum over n >= 1 of per_harmonic(n). Explicit terms up to
/// kExplicitHarmonics, then integral of per_harmonic(nu) from N + 1/2 to the
/// cap (default 50 gamma^3). Throws ConvergenceError if neither converges.
/// bound(n) >= |per_harmonic(n)|, optional, serves oscillating terms.
HarmonicTotal sum_over_harmonics(const std::function<double(double)>& per_harmonic, const BeamParams& beam,
                                 const Tolerance& tol, double cap = 0.0,
                                 const std::function<double(double)>& bound = {});

/// Radiated power: sum_n n w0 N_n.
double total_power(const BeamParams& beam, const Tolerance& tol = {1e-8, 0.0});
/// Photon emission rate: sum_n N_n.
double total_photon_rate(const BeamParams& beam, const Tolerance& tol = {1e-8, 0.0});

/// Instantaneous rate of momentum carried off by the radiation at orbital
/// time t, from the angular distribution of emitted power. Directed along
/// v0(t) with magnitude P beta / c.
Vec3 momentum_loss_rate(const BeamParams& beam, const Tolerance& tol = {1e-10, 0.0}, double t = 0.0);

/// Classical Larmor-Lienard power (2/3) Z^2 c beta^4 gamma^4 / R^2.
double classical_power(const BeamParams& beam);

struct SpectralRow {
  int n = 0;
  double theta = 0.0;
  double rate = 0.0;
};
using SpectralTable = std::vector<SpectralRow>;

/// schott_angular_rate on the grid harmonics x angles, evaluated on up to
/// `threads` workers. Row order is harmonic-major regardless of threads.
SpectralTable spectral_table(const BeamParams& beam, const std::vector<int>& harmonics,
                             const std::vector<double>& thetas, int threads = 1);

// ---------------------------------------------------------------------------
// Passage through a short bending magnet: straight entry, circular arc of the
// beam radius turning the velocity by `bend` radians, straight exit. The arc
// is centred so that the mid-arc velocity points along +x; the orbit lies in
// the xy plane.

struct BendGeometry {
  double bend = 0.0;   // total turning angle
  double T = 0.0;      // time spent on the arc
  Vec3 v_in;
  Vec3 v_out;
};
BendGeometry bend_geometry(const BeamParams& beam, double bend);

/// Final photon number |Q(+inf)|^2 for the passage. The straight segments use
/// their adiabatically switched closed forms, the arc is integrated.
double bend_photon_number(const BeamParams& beam, double bend, const PhotonMode& mode,
                          const Tolerance& tol = {1e-10, 0.0});

}  // namespace synchrad
