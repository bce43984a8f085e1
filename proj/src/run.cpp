#include "synchrad/run.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "json.hpp"

#include "synchrad/decoherence.hpp"
#include "synchrad/errors.hpp"
#include "synchrad/ir_model.hpp"
#include "synchrad/packets.hpp"
#include "synchrad/semiclassical.hpp"

namespace synchrad {

using nlohmann::ordered_json;

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const ConfigError*>(&error)) return kExitConfig;
  if (dynamic_cast<const ConvergenceError*>(&error)) return kExitConvergence;
  if (dynamic_cast<const DomainError*>(&error) || dynamic_cast<const RangeError*>(&error)) return kExitDomain;
  if (dynamic_cast<const std::ios_base::failure*>(&error) ||
      dynamic_cast<const std::filesystem::filesystem_error*>(&error)) {
    return kExitIo;
  }
  return kExitOther;
}

std::string error_json(const std::exception& error, const std::string& module,
                       const std::vector<std::pair<std::string, std::string>>& parameters) {
  ordered_json e;
  const char* kind = "error";
  if (const auto* c = dynamic_cast<const ConfigError*>(&error)) {
    kind = "config";
    e["key"] = c->key();
    e["line"] = c->line();
  } else if (const auto* c = dynamic_cast<const ConvergenceError*>(&error)) {
    kind = "convergence";
    e["best_estimate"] = c->best_estimate();
    e["error_estimate"] = c->error_estimate();
  } else if (dynamic_cast<const DomainError*>(&error)) {
    kind = "domain";
  } else if (dynamic_cast<const RangeError*>(&error)) {
    kind = "range";
  } else if (dynamic_cast<const std::ios_base::failure*>(&error) ||
             dynamic_cast<const std::filesystem::filesystem_error*>(&error)) {
    kind = "io";
  }
  ordered_json j;
  j["error"] = kind;
  j["message"] = error.what();
  j["module"] = module;
  for (auto& [k, v] : e.items()) j[k] = v;
  ordered_json params = ordered_json::object();
  for (const auto& [k, v] : parameters) params[k] = v;
  j["parameters"] = params;
  return j.dump(2) + "\n";
}

namespace {

const char* module_of(Command command) {
  switch (command) {
    case Command::spectrum: return "semiclassical";
    case Command::ir: return "ir_model";
    case Command::decohere: return "decoherence";
    case Command::packet: return "packets";
  }
  return "cli";
}

class Artifacts {
 public:
  Artifacts(std::filesystem::path dir, std::string prefix) : dir_(std::move(dir)), prefix_(std::move(prefix)) {}

  void write(const std::string& suffix, const std::string& content) {
    std::filesystem::create_directories(dir_);
    const std::filesystem::path path = dir_ / (prefix_ + suffix);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) throw std::ios_base::failure("cannot write " + path.string());
    files_.push_back(path.string());
  }

  std::filesystem::path path(const std::string& suffix) const { return dir_ / (prefix_ + suffix); }
  const std::vector<std::string>& files() const { return files_; }

 private:
  std::filesystem::path dir_;
  std::string prefix_;
  std::vector<std::string> files_;
};

ordered_json beam_json(const BeamParams& b) {
  ordered_json j;
  j["gamma"] = b.gamma;
  j["beta"] = b.beta;
  j["R_bohr"] = b.R;
  j["Z"] = b.Z;
  j["omega0_au"] = b.omega0;
  return j;
}

// Infinity has no JSON form; unbounded widths are written as null.
ordered_json finite_or_null(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); }

void run_spectrum(const RunConfig& cfg, const RunOptions& opt, Artifacts& out, ordered_json& summary) {
  const BeamParams& beam = *cfg.beam;
  const SpectrumBlock& s = cfg.spectrum;
  std::vector<int> harmonics;
  for (int n = s.n_min; n <= s.n_max; ++n) harmonics.push_back(n);
  std::vector<double> thetas;
  for (int j = 0; j < s.theta_points; ++j) thetas.push_back(numerics::kPi * j / (s.theta_points - 1));
  const SpectralTable table = spectral_table(beam, harmonics, thetas, opt.threads);
  std::string csv = "n,theta_rad,rate_au\n";
  for (const SpectralRow& row : table) {
    csv += std::to_string(row.n) + "," + format_number(row.theta) + "," + format_number(row.rate) + "\n";
  }
  out.write(".csv", csv);

  const Tolerance tol{s.tol, 0.0};
  const double power = total_power(beam, tol);
  const double classical = classical_power(beam);
  summary["beam"] = beam_json(beam);
  summary["total_power"] = power;
  summary["classical_power"] = classical;
  summary["relative_difference"] = classical > 0.0 ? power / classical - 1.0 : 0.0;
  summary["photon_rate"] = total_photon_rate(beam, tol);
  summary["harmonics"] = {s.n_min, s.n_max};
  summary["theta_points"] = s.theta_points;
}

void run_ir(const RunConfig& cfg, Artifacts& out, ordered_json& summary) {
  const IrBlock& b = cfg.ir;
  VelocityJump jump;
  jump.v1 = b.v1;
  jump.v2 = b.v2;
  jump.t3 = b.t3;
  jump.q_c = b.q_c;
  jump.Z = b.Z;
  jump.validate();
  const double delta = b.delta ? *b.delta : delta_shift(jump);
  const double la = std::log(b.omega_min);
  const double lb = std::log(b.omega_max);
  std::string csv = "omega_au,dN_domega\n";
  for (int i = 0; i < b.points; ++i) {
    const double w = i + 1 == b.points ? b.omega_max : std::exp(la + (lb - la) * i / (b.points - 1));
    csv += format_number(w) + "," + format_number(soft_spectral_density(jump, w, delta, Tolerance{b.tol, 0.0})) + "\n";
  }
  out.write(".csv", csv);

  const bool no_jump = norm(jump.v2 - jump.v1) == 0.0;
  summary["delta_au"] = delta;
  summary["delta_source"] = b.delta ? "config" : "computed";
  summary["delta_nonrel_au"] = delta_shift_nonrel(jump);
  if (norm(jump.v1) > 0.0) summary["lambda"] = jump_lambda(jump);
  summary["large_jump"] = jump.large_jump();
  summary["omega_min_au"] = b.omega_min;
  summary["omega_max_au"] = b.omega_max;
  summary["photon_total"] = no_jump ? 0.0 : soft_photon_total(jump, b.omega_min, b.omega_max, delta, Tolerance{b.tol, 0.0});
}

void run_decohere(const RunConfig& cfg, const RunOptions& opt, Artifacts& out, ordered_json& summary) {
  const BeamParams& beam = *cfg.beam;
  const DecohereBlock& d = cfg.decohere;
  std::vector<double> r;
  const double step = std::log(d.r_max / d.r_min) / (d.r_points - 1);
  for (int i = 0; i < d.r_points; ++i) r.push_back(i + 1 == d.r_points ? d.r_max : d.r_min * std::exp(step * i));

  const AxisProfile transverse(beam, Axis::transverse);
  const AxisProfile longitudinal(beam, Axis::longitudinal);
  std::string csv = "r_bohr,theta0_rad,S\n";
  if (d.method == DecohereMethod::axis) {
    for (double ri : r) {
      for (double th : d.theta0) {
        const AxisProfile& p = th == 0.0 ? longitudinal : transverse;
        csv += format_number(ri) + "," + format_number(th) + "," + format_number(p.s(ri, d.t)) + "\n";
      }
    }
  } else {
    const DecoherenceField f = decoherence_field(beam, d.t, r, d.theta0, Tolerance{d.tol, 0.0}, opt.threads);
    for (std::size_t i = 0; i < r.size(); ++i) {
      for (std::size_t j = 0; j < d.theta0.size(); ++j) {
        csv += format_number(r[i]) + "," + format_number(d.theta0[j]) + "," + format_number(f.at(i, j)) + "\n";
      }
    }
  }
  out.write(".csv", csv);

  const double wt = localization_width(transverse, d.t, d.width);
  const double wl = localization_width(longitudinal, d.t, d.width);
  summary["beam"] = beam_json(beam);
  summary["t_au"] = d.t;
  summary["t_s"] = au_time_to_seconds(d.t);
  summary["photons_emitted"] = d.t * transverse.rate();
  summary["method"] = d.method == DecohereMethod::axis ? "axis" : "direct";
  summary["width_transverse_bohr"] = finite_or_null(wt);
  summary["width_longitudinal_bohr"] = finite_or_null(wl);
  summary["transverse_unbounded"] = !std::isfinite(wt);
  summary["longitudinal_unbounded"] = !std::isfinite(wl);
}

void run_packet(const RunConfig& cfg, Artifacts&, ordered_json& summary) {
  const PacketReport r = packet_report(*cfg.beam, cfg.packet.poisson, cfg.packet.lambda);
  summary["gamma"] = r.gamma;
  summary["n1_mean"] = r.n1_mean;
  summary["drho_m"] = r.drho_m;
  summary["dphi"] = r.dphi;
  summary["arc_m"] = r.arc_m;
  summary["tau1_s"] = r.tau1_s;
  summary["lambda"] = r.lambda;
  summary["fluctuation_model"] = cfg.packet.poisson ? "poisson" : "fixed";
}

}  // namespace

RunResult run(const RunConfig& config, const RunOptions& options, std::ostream& err) {
  const std::filesystem::path dir = options.out_dir.empty() ? config.output_dir : options.out_dir;
  Artifacts out(dir, config.output_prefix);
  RunResult result;
  const auto start = std::chrono::steady_clock::now();
  try {
    ordered_json summary;
    summary["command"] = command_name(config.command);
    switch (config.command) {
      case Command::spectrum: run_spectrum(config, options, out, summary); break;
      case Command::ir: run_ir(config, out, summary); break;
      case Command::decohere: run_decohere(config, options, out, summary); break;
      case Command::packet: run_packet(config, out, summary); break;
    }
    if (!options.deterministic) {
      summary["elapsed_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    out.write(".json", summary.dump(2) + "\n");
    result.exit_code = kExitOk;
  } catch (const std::exception& e) {
    const std::string diag = error_json(e, module_of(config.command), config.entries);
    err << diag;
    try {
      out.write(".error.json", diag);
    } catch (const std::exception&) {
      // The diagnostic already went to err.
    }
    result.exit_code = exit_code_for(e);
  }
  result.files = out.files();
  return result;
}

}  // namespace synchrad
