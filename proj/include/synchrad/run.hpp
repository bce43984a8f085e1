#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "synchrad/config.hpp"

namespace synchrad {

struct RunOptions {
  std::string out_dir;  // overrides output.dir when not empty
  int threads = 1;
  bool deterministic = false;  // omit wall-clock fields from the JSON summary
};

struct RunResult {
  int exit_code = 0;
  std::vector<std::string> files;  // artifacts written, in order
};

/// Exit codes of run and of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitConvergence = 4;
inline constexpr int kExitIo = 5;
inline constexpr int kExitOther = 1;

/// Runs the configured command and writes its artifacts:
///   spectrum: <prefix>.csv (n,theta_rad,rate_au) and <prefix>.json
///   ir:       <prefix>.csv (omega_au,dN_domega) and <prefix>.json
///   decohere: <prefix>.csv (r_bohr,theta0_rad,S) and <prefix>.json
///   packet:   <prefix>.json
/// On failure writes <prefix>.error.json, prints the same JSON to err and
/// returns a nonzero code.
RunResult run(const RunConfig& config, const RunOptions& options, std::ostream& err);

/// 17 significant digits, '.' separator, independent of the locale.
std::string format_number(double x);

/// JSON diagnostic for an exception escaping configuration or a run.
/// module names the computation; parameters echo the configuration entries.
std::string error_json(const std::exception& error, const std::string& module,
                       const std::vector<std::pair<std::string, std::string>>& parameters);

/// Exit code matching the exception's kind.
int exit_code_for(const std::exception& error);

}  // namespace synchrad
