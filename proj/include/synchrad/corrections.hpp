#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "synchrad/semiclassical.hpp"

namespace synchrad {

/// mu(q, q') = -(q.q')/(m gamma) with m = 1: the recoil frequency shift a
/// photon q' imposes on the emission of q.
double mu_coupling(const Vec3& q, const Vec3& q_prime, double gamma);

/// Quadrature over photon momenta q' with |q'| <= q_c: radial nodes in |q'|,
/// Gauss-Legendre in cos(theta'), midpoint rule in phi'. Weights include the
/// measure q'^2 dq' dOmega' / (2 pi)^3.
struct ModeSum {
  double q_c = kSpeedOfLight;
  std::vector<double> radial_nodes;
  std::vector<double> radial_weights;  // include q'^2 dq'
  std::vector<double> polar_nodes;     // cos(theta')
  std::vector<double> polar_weights;
  int azimuthal = 16;

  /// q_c > 0, nodes strictly increasing, sizes consistent.
  void validate() const;
  /// Number of (q', polarization) terms.
  std::size_t size() const { return 2 * radial_nodes.size() * polar_nodes.size() * azimuthal; }
};

/// Radial grid logarithmic from q_c * 1e-7 up to the scale 1/(c t_scale),
/// then linear with panels short enough to follow phases q' c t_scale.
ModeSum make_mode_sum(double q_c, double t_scale, int polar = 24, int azimuthal = 16);

struct PExponent {
  std::complex<double> value;
  double t1 = 0.0;
  double t2 = 0.0;
  bool uv_warning = false;  // top octave below q_c contributes > 10%
};

/// Amplitude Q_beta(q', t) of the field mode (beta, q') at time t.
using AmplitudeFn = std::function<std::complex<double>(int beta, const Vec3& q_prime, double t)>;

/// Amplitudes for a charge moving uniformly with velocity v since the
/// infinite past (adiabatic switch-on), r(t) = v t:
/// Q = (Z/c) g e.v exp(i (w - q.v) t)/(w - q.v).
AmplitudeFn adiabatic_uniform_amplitudes(const Vec3& v, double Z);

struct POptions {
  /// Terms exp(-i mu t1), exp(i mu t2) are dropped for a mode once
  /// |mu| min(|t1|, |t2|) exceeds this.
  double drop_threshold = 20.0;
};

/// The mode-sum exponent P_q(t1, t2): sum over beta and q' of
/// |Q(t1)|^2 (1 - e^{-i mu t1}) + |Q(t2)|^2 (1 - e^{i mu t2})
///   - Q*(t1) Q(t2) (1 - e^{-i mu t1})(1 - e^{i mu t2}),
/// with mu = mu_coupling(q, q', gamma) and |q'| capped at q_c.
PExponent p_general(const Vec3& q, const AmplitudeFn& amplitudes, const ModeSum& modes, double gamma, double t1,
                    double t2, const POptions& options = {});

/// Closed angular form for a uniformly moving charge:
/// P = Z^2/(4 pi^2 c^3) * integral dOmega' [n' x v]^2/(1 - n'.v/c)^2 *
///     (i Si(w2 D) + i Si((w2 + w1) D) + Cin(w2 |D|) + Cin(|w2 + w1| |D|)),
/// D = t1 - t2, w1 = q_c n'.q/gamma, w2 = (c - n'.v) q_c.
PExponent p_const_velocity(const Vec3& v0, const Vec3& q, double q_c, double gamma, double Z, double t1, double t2,
                           const Tolerance& tol = {1e-7, 0.0});

/// Z^2/(4 pi^2 c^3) * integral dOmega' [n' x v]^2/(1 - n'.v/c)^2; the
/// coefficient of the logarithm in p_const_velocity.
double p_angular_coefficient(const Vec3& v0, double Z, const Tolerance& tol = {1e-12, 0.0});

/// Large-|dt| nonrelativistic form
/// (2 Z^2 v^2/(3 pi c^3)) [i pi sign(dt) + 2 (C + ln(c q_c) + ln|dt|)].
std::complex<double> p_nonrel_asymptotic(double v0_mag, double Z, double q_c, double dt);

/// p_const_velocity tabulated on |D| (it depends on t1 - t2 only) and
/// interpolated linearly in ln|D|.
class PTable {
 public:
  PTable(const Vec3& v0, const Vec3& q, double q_c, double gamma, double Z, double d_min, double d_max,
         int points = 200);
  std::complex<double> operator()(double t1, double t2) const;

 private:
  double ln_min_ = 0.0;
  double ln_step_ = 0.0;
  std::vector<std::complex<double>> values_;  // at D > 0; D < 0 is the conjugate
  std::complex<double> exact_min_;
  Vec3 v0_;
  Vec3 q_;
  double q_c_ = 0.0;
  double gamma_ = 1.0;
  double Z_ = 1.0;
};

using PProvider = std::function<std::complex<double>(double t1, double t2)>;

struct CorrectedOptions {
  double tau_in = 0.0;      // switch-on time; 0 means the charge is on from t = 0
  double tau_out = 0.0;     // switch-off time before t; 0 means no switch-off
  int nodes_per_panel = 8;  // Gauss-Legendre order per time panel
  int min_panels = 16;
  int max_nodes = 6000;
};

struct CorrectedResult {
  double value = 0.0;
  double imag_residual = 0.0;  // |Im| of the double integral
};

/// Double time integral over [0, t]^2 of Qdot*(t1) Qdot(t2) exp(-P(t1, t2)) with
/// Qdot(t) = i (Z/c) g e.v(t) exp(i w t - i q.r(t)) (1 - e^{-t/tau_in}) (1 - e^{-(t_end - t)/tau_out}).
/// A null provider means P = 0.
CorrectedResult corrected_photon_number(const Trajectory& traj, const PhotonMode& mode, double t, double Z,
                                        const PProvider& p, const CorrectedOptions& options = {});

/// Average of f(v) over a Gaussian momentum packet centred on k0 (m = 1):
/// momentum spread 1/delta_l along k0 and 1/delta_perp across it, with
/// v = c^2 k / E(k). Tensor Gauss-Hermite of the given order per axis.
double packet_average(const Vec3& k0, double delta_l, double delta_perp, int order,
                      const std::function<double(const Vec3& v)>& f);

}  // namespace synchrad
