#pragma once

#include <cstdint>

namespace synchrad {

// Atomic units: hbar = |e| = m_e = 1. Conversion constants are CODATA 2018.
inline constexpr double kSpeedOfLight = 137.035999;
inline constexpr double kBohrPerMeter = 1.0 / 5.29177210903e-11;
inline constexpr double kSecondsPerAtomicTime = 2.4188843265857e-17;
inline constexpr double kElectronRestMeV = 0.51099895000;
inline constexpr double kElectronRestGeV = kElectronRestMeV * 1e-3;
// Tesla per atomic unit of magnetic field.
inline constexpr double kTeslaPerAtomicField = 2.35051756758e5;

struct LabInput {
  double energy_GeV = 0.0;
  double radius_m = 0.0;
  double Z = 1.0;

  /// Throws DomainError for non-positive radius or energy below the rest mass.
  void validate() const;
};

/// Beam on a circular orbit, all in atomic units.
struct BeamParams {
  double Z = 1.0;
  double gamma = 1.0;
  double R = 1.0;       // orbit radius, bohr
  double beta = 0.0;    // v0/c
  double omega0 = 0.0;  // orbital angular frequency
  double H0 = 0.0;      // field strength
  double v0 = 0.0;      // speed

  void validate() const;
};

BeamParams beam_from_lab(const LabInput& input);
BeamParams beam_from_gamma(double gamma, double radius_bohr, double Z = 1.0);
BeamParams beam_from_beta(double beta, double radius_bohr, double Z = 1.0);

/// Inverse of beam_from_lab.
LabInput lab_from_beam(const BeamParams& beam);

/// round(gamma^3): the harmonic around which the spectrum peaks.
std::int64_t critical_harmonic(const BeamParams& beam);

/// The reference synchrotron: E = 0.68 GeV, R = 2 m.
BeamParams fian60_beam();

inline double meters_to_bohr(double m) { return m * kBohrPerMeter; }
inline double bohr_to_meters(double b) { return b / kBohrPerMeter; }
inline double au_time_to_seconds(double t) { return t * kSecondsPerAtomicTime; }
inline double seconds_to_au_time(double s) { return s / kSecondsPerAtomicTime; }

}  // namespace synchrad
