#include "synchrad/units.hpp"

#include <cmath>
#include <limits>

#include "synchrad/errors.hpp"

namespace synchrad {

void LabInput::validate() const {
  if (!(radius_m > 0.0) || !std::isfinite(radius_m)) throw DomainError("beam: radius must be positive");
  if (!(energy_GeV >= kElectronRestGeV) || !std::isfinite(energy_GeV)) {
    throw DomainError("beam: energy below the electron rest energy");
  }
  if (!(Z > 0.0)) throw DomainError("beam: charge number must be positive");
}

void BeamParams::validate() const {
  if (!(gamma >= 1.0) || !std::isfinite(gamma)) throw DomainError("beam: gamma must be >= 1");
  if (!(beta >= 0.0 && beta < 1.0)) throw DomainError("beam: beta must lie in [0, 1)");
  if (!(R > 0.0) || !std::isfinite(R)) throw DomainError("beam: radius must be positive");
  if (!(Z > 0.0)) throw DomainError("beam: charge number must be positive");
}

BeamParams beam_from_gamma(double gamma, double radius_bohr, double Z) {
  BeamParams b;
  b.Z = Z;
  b.gamma = gamma;
  b.R = radius_bohr;
  if (!(gamma >= 1.0)) throw DomainError("beam: gamma must be >= 1");
  // (gamma - 1)(gamma + 1) avoids cancellation near gamma = 1.
  b.beta = std::sqrt((gamma - 1.0) * (gamma + 1.0)) / gamma;
  b.v0 = b.beta * kSpeedOfLight;
  b.omega0 = b.v0 / radius_bohr;
  b.H0 = gamma * kSpeedOfLight * b.omega0;
  b.validate();
  return b;
}

BeamParams beam_from_beta(double beta, double radius_bohr, double Z) {
  if (!(beta >= 0.0 && beta < 1.0)) throw DomainError("beam: beta must lie in [0, 1)");
  BeamParams b;
  b.Z = Z;
  b.beta = beta;
  b.gamma = 1.0 / std::sqrt((1.0 - beta) * (1.0 + beta));
  b.R = radius_bohr;
  b.v0 = beta * kSpeedOfLight;
  b.omega0 = b.v0 / radius_bohr;
  b.H0 = b.gamma * kSpeedOfLight * b.omega0;
  b.validate();
  return b;
}

BeamParams beam_from_lab(const LabInput& input) {
  input.validate();
  double gamma = input.energy_GeV / kElectronRestGeV;
  // The rest energy itself must give a beam at rest despite rounding in the ratio.
  if (gamma - 1.0 <= 4.0 * std::numeric_limits<double>::epsilon()) gamma = 1.0;
  return beam_from_gamma(gamma, meters_to_bohr(input.radius_m), input.Z);
}

LabInput lab_from_beam(const BeamParams& beam) {
  return {beam.gamma * kElectronRestGeV, bohr_to_meters(beam.R), beam.Z};
}

std::int64_t critical_harmonic(const BeamParams& beam) {
  return static_cast<std::int64_t>(std::llround(beam.gamma * beam.gamma * beam.gamma));
}

BeamParams fian60_beam() { return beam_from_lab({0.68, 2.0, 1.0}); }

}  // namespace synchrad
