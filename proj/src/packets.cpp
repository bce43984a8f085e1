#include "synchrad/packets.hpp"

#include <cmath>

#include "synchrad/errors.hpp"
#include "synchrad/numerics.hpp"

namespace synchrad {

namespace {
constexpr double c = kSpeedOfLight;
}

void LandauLevelState::validate() const {
  if (n1 < 0 || n2 < 0) throw DomainError("Landau level: n1 and n2 must be >= 0");
  if (sigma != 0.5 && sigma != -0.5) throw DomainError("Landau level: sigma must be +1/2 or -1/2");
  if (!std::isfinite(p)) throw DomainError("Landau level: p must be finite");
}

double larmor_frequency(double H0) {
  if (!(H0 > 0.0)) throw DomainError("larmor_frequency: H0 must be positive");
  return H0 / (2.0 * c);
}

double energy_level(const LandauLevelState& state, double H0) {
  state.validate();
  const double wl = larmor_frequency(H0);
  const double level = static_cast<double>(state.n1) + state.sigma + 0.5;
  return std::sqrt(c * c * c * c + state.p * state.p * c * c + 4.0 * wl * c * c * level);
}

double level_spacing(const LandauLevelState& state, double H0) {
  LandauLevelState up = state;
  up.n1 += 1;
  return 4.0 * larmor_frequency(H0) * c * c / (energy_level(state, H0) + energy_level(up, H0));
}

double mean_principal_number(const BeamParams& beam) {
  beam.validate();
  if (beam.gamma == 1.0) return 0.0;
  const double wl = 0.5 * beam.gamma * beam.omega0;
  return (beam.gamma * beam.gamma - 1.0) * c * c / (4.0 * wl);
}

PacketWidths packet_widths(const BeamParams& beam) {
  const double n1 = mean_principal_number(beam);
  if (!(n1 > 0.0)) throw DomainError("packet_widths: needs gamma > 1");
  PacketWidths w;
  const double energy = beam.gamma * c * c;
  w.radial = std::sqrt(2.0 * beam.R * c / energy);
  w.azimuthal_angle = 1.0 / std::sqrt(n1);
  w.azimuthal_arc = beam.R * w.azimuthal_angle;
  return w;
}

double radial_width_estimate(const BeamParams& beam) {
  beam.validate();
  if (!(beam.v0 > 0.0)) throw DomainError("radial_width_estimate: needs v0 > 0");
  return std::sqrt(beam.R / (beam.gamma * beam.v0));
}

double spreading_time(const BeamParams& beam, double delta_n1) {
  beam.validate();
  if (!(delta_n1 > 0.0)) throw DomainError("spreading_time: delta_n1 must be positive");
  return beam.gamma * beam.R * beam.R / delta_n1;
}

double poisson_fluctuation(double n1_mean) {
  if (!(n1_mean > 0.0)) throw DomainError("poisson_fluctuation: n1_mean must be positive");
  return 1.0 / std::sqrt(n1_mean);
}

double relative_fluctuation(const BeamParams& beam, bool poisson, double fixed_lambda) {
  if (poisson) return poisson_fluctuation(mean_principal_number(beam));
  if (!(fixed_lambda > 0.0)) throw DomainError("relative_fluctuation: fixed lambda must be positive");
  return fixed_lambda;
}

void WavePacketSpec::validate() const {
  if (!(n1_mean >= 0.0 && n2_mean >= 0.0)) throw DomainError("wave packet: mean quantum numbers must be >= 0");
  if (!(n2_mean <= 0.01 * n1_mean)) throw DomainError("wave packet: need n2_mean << n1_mean");
  if (!(delta0 > 0.0)) throw DomainError("wave packet: delta0 must be positive");
}

double WavePacketSpec::amplitude(double p) const {
  return std::pow(2.0 * numerics::kPi * delta0 * delta0, 0.25) * std::exp(-p * p * delta0 * delta0 / 4.0);
}

PacketReport packet_report(const BeamParams& beam, bool poisson, double fixed_lambda) {
  PacketReport r;
  const PacketWidths w = packet_widths(beam);
  r.gamma = beam.gamma;
  r.n1_mean = mean_principal_number(beam);
  r.drho_m = bohr_to_meters(w.radial);
  r.dphi = w.azimuthal_angle;
  r.arc_m = bohr_to_meters(w.azimuthal_arc);
  r.lambda = relative_fluctuation(beam, poisson, fixed_lambda);
  r.tau1_s = au_time_to_seconds(spreading_time(beam, r.lambda * r.n1_mean));
  return r;
}

}  // namespace synchrad
