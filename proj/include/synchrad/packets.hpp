#pragma once

#include <cstdint>

#include "synchrad/units.hpp"

namespace synchrad {

/// Landau level of an electron in a uniform field: principal and center
/// oscillator numbers, spin projection, longitudinal momentum.
struct LandauLevelState {
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;
  double sigma = -0.5;
  double p = 0.0;

  /// n1, n2 >= 0, sigma = +-1/2, p finite. Throws DomainError.
  void validate() const;
};

/// w_L = H0/(2c).
double larmor_frequency(double H0);

/// sqrt(c^4 + p^2 c^2 + 4 w_L c^2 (n1 + sigma + 1/2)).
double energy_level(const LandauLevelState& state, double H0);

/// E(n1 + 1) - E(n1), as 4 w_L c^2/(E(n1) + E(n1 + 1)) to avoid cancellation.
double level_spacing(const LandauLevelState& state, double H0);

/// Mean n1 of the orbit at p = 0: (gamma^2 - 1) c^2/(4 w_L), w_L = gamma w0/2.
double mean_principal_number(const BeamParams& beam);

struct PacketWidths {
  double radial = 0.0;           // sqrt(2 R c/E), bohr
  double azimuthal_angle = 0.0;  // 1/sqrt(n1_mean)
  double azimuthal_arc = 0.0;    // R * azimuthal_angle, bohr
};

PacketWidths packet_widths(const BeamParams& beam);

/// Rougher radial estimate sqrt(R/(gamma v0)), bohr.
double radial_width_estimate(const BeamParams& beam);

/// gamma R^2/delta_n1, atomic time. Throws DomainError unless delta_n1 > 0.
double spreading_time(const BeamParams& beam, double delta_n1);

/// 1/sqrt(n1_mean): relative spread of a Poisson-distributed n1.
double poisson_fluctuation(double n1_mean);

/// delta_n1/n1_mean: Poisson when poisson is set, else fixed_lambda.
double relative_fluctuation(const BeamParams& beam, bool poisson = true, double fixed_lambda = 1e-6);

/// Packet over Landau levels with a Gaussian longitudinal profile.
struct WavePacketSpec {
  double n1_mean = 0.0;
  double n2_mean = 0.0;
  double delta0 = 1.0;  // longitudinal width, bohr
  double alpha1 = 0.0;
  double alpha2 = 0.0;

  /// n1_mean, n2_mean >= 0, n2_mean <= 0.01 n1_mean, delta0 > 0.
  void validate() const;
  /// C_p = (2 pi delta0^2)^(1/4) exp(-p^2 delta0^2/4).
  double amplitude(double p) const;
};

/// Summary in lab units.
struct PacketReport {
  double gamma = 0.0;
  double n1_mean = 0.0;
  double drho_m = 0.0;
  double dphi = 0.0;
  double arc_m = 0.0;
  double tau1_s = 0.0;
  double lambda = 0.0;
};

PacketReport packet_report(const BeamParams& beam, bool poisson = true, double fixed_lambda = 1e-6);

}  // namespace synchrad
