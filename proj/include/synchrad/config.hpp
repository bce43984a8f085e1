#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "synchrad/decoherence.hpp"
#include "synchrad/units.hpp"
#include "synchrad/vec3.hpp"

namespace synchrad {

/// Malformed or invalid run configuration. key is the offending key (or the
/// missing one), line its 1-based line in the document, 0 when it is absent.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, std::string key, int line)
      : std::runtime_error(message), key_(std::move(key)), line_(line) {}

  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }

 private:
  std::string key_;
  int line_;
};

enum class Command { spectrum, ir, decohere, packet };

const char* command_name(Command command);

struct SpectrumBlock {
  int n_min = 1;
  int n_max = 20;
  int theta_points = 91;  // uniform on [0, pi], ends included
  double tol = 1e-8;      // relative tolerance of the totals
};

struct IrBlock {
  Vec3 v1;
  Vec3 v2;
  double t3 = 1.0;
  double q_c = kSpeedOfLight;
  double Z = 1.0;
  double omega_min = 1e-6;
  double omega_max = 1.0;
  int points = 61;                 // log grid, ends included
  std::optional<double> delta;     // unset: computed level shift
  double tol = 1e-8;
};

enum class DecohereMethod { axis, direct };

struct DecohereBlock {
  double t = 0.0;
  double r_min = 1e-3;
  double r_max = 1e7;
  int r_points = 41;  // log grid, ends included
  std::vector<double> theta0{0.0, 1.5707963267948966};
  DecohereMethod method = DecohereMethod::axis;
  double tol = 1e-7;
  WidthOptions width;
};

struct PacketBlock {
  bool poisson = true;
  double lambda = 1e-6;  // used when poisson is false
};

struct RunConfig {
  Command command = Command::spectrum;
  std::optional<LabInput> lab;  // set when the beam was given in lab units
  std::optional<BeamParams> beam;
  SpectrumBlock spectrum;
  IrBlock ir;
  DecohereBlock decohere;
  PacketBlock packet;
  std::string output_dir = ".";
  std::string output_prefix;  // defaults to the command name
  /// Every key = value pair as written, in document order.
  std::vector<std::pair<std::string, std::string>> entries;
};

/// Parses a flat key = value document with dotted sections (beam.gamma = 2).
/// The beam takes one of beam.energy_gev, beam.gamma, beam.beta and one of
/// beam.radius_m, beam.radius_bohr, beam.field_tesla.
/// '#' starts a comment. Throws ConfigError naming the key and line on
/// unknown or duplicate keys, bad values, missing required keys, keys of a
/// block other than the command's, and invariant violations.
RunConfig parse_config(const std::string& text);

/// parse_config on a file's contents. Throws ConfigError if unreadable.
RunConfig load_config(const std::string& path);

}  // namespace synchrad
