#include "synchrad/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "synchrad/errors.hpp"
#include "synchrad/numerics.hpp"

namespace synchrad {

const char* command_name(Command command) {
  switch (command) {
    case Command::spectrum: return "spectrum";
    case Command::ir: return "ir";
    case Command::decohere: return "decohere";
    case Command::packet: return "packet";
  }
  return "unknown";
}

namespace {

const std::set<std::string> kKnownKeys = {
    "command",
    "output.dir",
    "output.prefix",
    "beam.energy_gev",
    "beam.radius_m",
    "beam.gamma",
    "beam.beta",
    "beam.radius_bohr",
    "beam.field_tesla",
    "beam.Z",
    "spectrum.n_min",
    "spectrum.n_max",
    "spectrum.theta_points",
    "spectrum.tol",
    "ir.beta1",
    "ir.beta2",
    "ir.t3",
    "ir.q_c",
    "ir.Z",
    "ir.omega_min",
    "ir.omega_max",
    "ir.points",
    "ir.delta",
    "ir.tol",
    "decohere.t_au",
    "decohere.r_min",
    "decohere.r_max",
    "decohere.r_points",
    "decohere.theta0",
    "decohere.method",
    "decohere.tol",
    "decohere.width.r_min",
    "decohere.width.r_max",
    "decohere.width.points",
    "decohere.width.edge_tol",
    "decohere.width.refine_tol",
    "decohere.width.max_doublings",
    "packet.poisson",
    "packet.lambda",
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  int line = 0;
};

class Document {
 public:
  explicit Document(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
      ++line;
      const auto hash = raw.find('#');
      const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
      if (s.empty()) continue;
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("expected 'key = value'", "", line);
      const std::string key = trim(s.substr(0, eq));
      const std::string value = trim(s.substr(eq + 1));
      if (key.empty()) throw ConfigError("empty key", "", line);
      if (!kKnownKeys.count(key)) throw ConfigError("unknown key '" + key + "'", key, line);
      if (value.empty()) throw ConfigError("empty value for '" + key + "'", key, line);
      if (entries_.count(key)) throw ConfigError("duplicate key '" + key + "'", key, line);
      entries_[key] = {value, line};
      order_.emplace_back(key, value);
    }
  }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  int line(const std::string& key) const { return has(key) ? entries_.at(key).line : 0; }
  const std::string& raw(const std::string& key) const { return entries_.at(key).value; }
  const std::map<std::string, Entry>& entries() const { return entries_; }
  const std::vector<std::pair<std::string, std::string>>& order() const { return order_; }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError(key + ": " + what, key, line(key));
  }

  double number(const std::string& key) const { return parse_number(key, raw(key)); }

  double number_or(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

  int integer_or(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    const std::string& s = raw(key);
    int v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) fail(key, "expected an integer, got '" + s + "'");
    return v;
  }

  bool boolean_or(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string& s = raw(key);
    if (s == "true") return true;
    if (s == "false") return false;
    fail(key, "expected true or false, got '" + s + "'");
  }

  std::vector<double> list(const std::string& key) const {
    std::vector<double> out;
    std::istringstream in(raw(key));
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(parse_number(key, trim(item)));
    return out;
  }

  Vec3 vec(const std::string& key) const {
    const std::vector<double> v = list(key);
    if (v.size() != 3) fail(key, "expected three comma-separated components");
    return {v[0], v[1], v[2]};
  }

  void require(const std::string& key, const std::string& context) const {
    if (!has(key)) throw ConfigError("missing key '" + key + "' (" + context + ")", key, 0);
  }

 private:
  double parse_number(const std::string& key, const std::string& s) const {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) {
      fail(key, "expected a finite number, got '" + s + "'");
    }
    return v;
  }

  std::map<std::string, Entry> entries_;
  std::vector<std::pair<std::string, std::string>> order_;
};

std::string block_of(const std::string& key) {
  const auto dot = key.find('.');
  return dot == std::string::npos ? key : key.substr(0, dot);
}

void parse_beam(const Document& doc, RunConfig& cfg) {
  const int kinds = doc.has("beam.energy_gev") + doc.has("beam.gamma") + doc.has("beam.beta");
  if (kinds == 0) {
    throw ConfigError("missing key 'beam.energy_gev' (or beam.gamma / beam.beta)", "beam.energy_gev", 0);
  }
  if (kinds > 1) {
    const std::string key = doc.has("beam.beta") ? "beam.beta" : "beam.gamma";
    doc.fail(key, "give exactly one of beam.energy_gev, beam.gamma, beam.beta");
  }
  const int radii = doc.has("beam.radius_m") + doc.has("beam.radius_bohr") + doc.has("beam.field_tesla");
  if (radii > 1) {
    const std::string key = doc.has("beam.field_tesla") ? "beam.field_tesla" : "beam.radius_bohr";
    doc.fail(key, "give only one of beam.radius_m, beam.radius_bohr, beam.field_tesla");
  }
  const double Z = doc.number_or("beam.Z", 1.0);
  if (!(Z > 0.0)) doc.fail("beam.Z", "invariant violation: must be positive");
  double radius_bohr = 0.0;
  if (doc.has("beam.radius_m")) {
    const double rm = doc.number("beam.radius_m");
    if (!(rm > 0.0)) doc.fail("beam.radius_m", "invariant violation: must be positive");
    radius_bohr = meters_to_bohr(rm);
  } else if (doc.has("beam.radius_bohr")) {
    radius_bohr = doc.number("beam.radius_bohr");
    if (!(radius_bohr > 0.0)) doc.fail("beam.radius_bohr", "invariant violation: must be positive");
  } else if (!doc.has("beam.field_tesla")) {
    throw ConfigError("missing key 'beam.radius_m' (or beam.radius_bohr, beam.field_tesla)", "beam.radius_m", 0);
  }
  double gamma = 0.0;
  if (doc.has("beam.energy_gev")) {
    const double e = doc.number("beam.energy_gev");
    if (!(e >= kElectronRestGeV)) doc.fail("beam.energy_gev", "invariant violation: below the electron rest energy");
    gamma = e / kElectronRestGeV;
  } else if (doc.has("beam.gamma")) {
    gamma = doc.number("beam.gamma");
    if (!(gamma >= 1.0)) doc.fail("beam.gamma", "invariant violation: gamma must be >= 1");
  } else {
    const double b = doc.number("beam.beta");
    if (!(b >= 0.0 && b < 1.0)) doc.fail("beam.beta", "invariant violation: beta must lie in [0, 1)");
    gamma = 1.0 / std::sqrt((1.0 - b) * (1.0 + b));
  }
  if (doc.has("beam.field_tesla")) {
    // Orbit radius of a unit charge: R = gamma beta c/H0, H0 in atomic units.
    const double tesla = doc.number("beam.field_tesla");
    if (!(tesla > 0.0)) doc.fail("beam.field_tesla", "invariant violation: must be positive");
    if (!(gamma > 1.0)) doc.fail("beam.field_tesla", "invariant violation: a field-defined orbit needs gamma > 1");
    const double beta_gamma = std::sqrt((gamma - 1.0) * (gamma + 1.0));
    radius_bohr = beta_gamma * kSpeedOfLight / (tesla / kTeslaPerAtomicField);
  }
  if (doc.has("beam.energy_gev") && doc.has("beam.radius_m")) {
    LabInput lab{doc.number("beam.energy_gev"), doc.number("beam.radius_m"), Z};
    cfg.lab = lab;
    cfg.beam = beam_from_lab(lab);
  } else if (doc.has("beam.beta")) {
    cfg.beam = beam_from_beta(doc.number("beam.beta"), radius_bohr, Z);
  } else {
    cfg.beam = beam_from_gamma(gamma, radius_bohr, Z);
  }
}

void parse_spectrum(const Document& doc, SpectrumBlock& s) {
  s.n_min = doc.integer_or("spectrum.n_min", s.n_min);
  s.n_max = doc.integer_or("spectrum.n_max", s.n_max);
  s.theta_points = doc.integer_or("spectrum.theta_points", s.theta_points);
  s.tol = doc.number_or("spectrum.tol", s.tol);
  if (s.n_min < 1) doc.fail("spectrum.n_min", "invariant violation: must be >= 1");
  if (s.n_max < s.n_min) doc.fail("spectrum.n_max", "invariant violation: must be >= spectrum.n_min");
  if (s.theta_points < 2) doc.fail("spectrum.theta_points", "invariant violation: must be >= 2");
  if (!(s.tol > 0.0 && s.tol < 1.0)) doc.fail("spectrum.tol", "invariant violation: must lie in (0, 1)");
}

void parse_ir(const Document& doc, IrBlock& ir) {
  doc.require("ir.beta1", "ir command");
  doc.require("ir.beta2", "ir command");
  const Vec3 b1 = doc.vec("ir.beta1");
  const Vec3 b2 = doc.vec("ir.beta2");
  if (!(norm(b1) < 1.0)) doc.fail("ir.beta1", "invariant violation: |beta1| must be < 1");
  if (!(norm(b2) < 1.0)) doc.fail("ir.beta2", "invariant violation: |beta2| must be < 1");
  ir.v1 = b1 * kSpeedOfLight;
  ir.v2 = b2 * kSpeedOfLight;
  ir.t3 = doc.number_or("ir.t3", ir.t3);
  ir.q_c = doc.number_or("ir.q_c", ir.q_c);
  ir.Z = doc.number_or("ir.Z", ir.Z);
  ir.omega_min = doc.number_or("ir.omega_min", ir.omega_min);
  ir.omega_max = doc.number_or("ir.omega_max", ir.omega_max);
  ir.points = doc.integer_or("ir.points", ir.points);
  ir.tol = doc.number_or("ir.tol", ir.tol);
  if (doc.has("ir.delta")) {
    if (doc.raw("ir.delta") != "auto") {
      ir.delta = doc.number("ir.delta");
      if (!(*ir.delta >= 0.0)) doc.fail("ir.delta", "invariant violation: must be >= 0");
    }
  }
  if (!(ir.t3 > 0.0)) doc.fail("ir.t3", "invariant violation: must be positive");
  if (!(ir.q_c > 0.0)) doc.fail("ir.q_c", "invariant violation: must be positive");
  if (!(ir.omega_min > 0.0)) doc.fail("ir.omega_min", "invariant violation: must be positive");
  if (!(ir.omega_max > ir.omega_min)) doc.fail("ir.omega_max", "invariant violation: must exceed ir.omega_min");
  if (ir.points < 2) doc.fail("ir.points", "invariant violation: must be >= 2");
  if (!(ir.tol > 0.0 && ir.tol < 1.0)) doc.fail("ir.tol", "invariant violation: must lie in (0, 1)");
}

void parse_decohere(const Document& doc, DecohereBlock& d) {
  doc.require("decohere.t_au", "decohere command");
  d.t = doc.number("decohere.t_au");
  if (!(d.t > 0.0)) doc.fail("decohere.t_au", "invariant violation: must be positive");
  d.r_min = doc.number_or("decohere.r_min", d.r_min);
  d.r_max = doc.number_or("decohere.r_max", d.r_max);
  d.r_points = doc.integer_or("decohere.r_points", d.r_points);
  d.tol = doc.number_or("decohere.tol", d.tol);
  if (!(d.r_min > 0.0)) doc.fail("decohere.r_min", "invariant violation: must be positive");
  if (!(d.r_max > d.r_min)) doc.fail("decohere.r_max", "invariant violation: must exceed decohere.r_min");
  if (d.r_points < 2) doc.fail("decohere.r_points", "invariant violation: must be >= 2");
  if (!(d.tol > 0.0 && d.tol < 1.0)) doc.fail("decohere.tol", "invariant violation: must lie in (0, 1)");
  if (doc.has("decohere.theta0")) {
    d.theta0 = doc.list("decohere.theta0");
    for (double th : d.theta0) {
      if (!(th >= 0.0 && th <= numerics::kPi)) doc.fail("decohere.theta0", "invariant violation: angles in [0, pi]");
    }
  }
  if (doc.has("decohere.method")) {
    const std::string& m = doc.raw("decohere.method");
    if (m == "axis") {
      d.method = DecohereMethod::axis;
    } else if (m == "direct") {
      d.method = DecohereMethod::direct;
    } else {
      doc.fail("decohere.method", "expected axis or direct, got '" + m + "'");
    }
  }
  if (d.method == DecohereMethod::axis) {
    for (double th : d.theta0) {
      if (th != 0.0 && std::abs(th - 0.5 * numerics::kPi) > 1e-12) {
        doc.fail("decohere.theta0", "invariant violation: method axis accepts only 0 and pi/2");
      }
    }
  }
  WidthOptions& w = d.width;
  w.r_min = doc.number_or("decohere.width.r_min", w.r_min);
  w.r_max = doc.number_or("decohere.width.r_max", w.r_max);
  w.points = doc.integer_or("decohere.width.points", w.points);
  w.edge_tol = doc.number_or("decohere.width.edge_tol", w.edge_tol);
  w.refine_tol = doc.number_or("decohere.width.refine_tol", w.refine_tol);
  w.max_doublings = doc.integer_or("decohere.width.max_doublings", w.max_doublings);
  if (!(w.r_min > 0.0)) doc.fail("decohere.width.r_min", "invariant violation: must be positive");
  if (!(w.r_max > w.r_min)) doc.fail("decohere.width.r_max", "invariant violation: must exceed width.r_min");
  if (w.points < 2) doc.fail("decohere.width.points", "invariant violation: must be >= 2");
  if (!(w.edge_tol > 0.0)) doc.fail("decohere.width.edge_tol", "invariant violation: must be positive");
  if (!(w.refine_tol > 0.0)) doc.fail("decohere.width.refine_tol", "invariant violation: must be positive");
  if (w.max_doublings < 0) doc.fail("decohere.width.max_doublings", "invariant violation: must be >= 0");
}

void parse_packet(const Document& doc, PacketBlock& p) {
  p.poisson = doc.boolean_or("packet.poisson", p.poisson);
  p.lambda = doc.number_or("packet.lambda", p.lambda);
  if (!(p.lambda > 0.0)) doc.fail("packet.lambda", "invariant violation: must be positive");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  const Document doc(text);
  RunConfig cfg;
  cfg.entries = doc.order();
  doc.require("command", "one of spectrum, ir, decohere, packet");
  const std::string& name = doc.raw("command");
  if (name == "spectrum") {
    cfg.command = Command::spectrum;
  } else if (name == "ir") {
    cfg.command = Command::ir;
  } else if (name == "decohere") {
    cfg.command = Command::decohere;
  } else if (name == "packet") {
    cfg.command = Command::packet;
  } else {
    doc.fail("command", "expected spectrum, ir, decohere or packet, got '" + name + "'");
  }

  const bool uses_beam = cfg.command != Command::ir;
  for (const auto& [key, entry] : doc.entries()) {
    const std::string block = block_of(key);
    if (block == "command" || block == "output") continue;
    if (block == "beam" ? !uses_beam : block != name) {
      throw ConfigError("key '" + key + "' is not used by command " + name, key, entry.line);
    }
  }

  if (doc.has("output.dir")) cfg.output_dir = doc.raw("output.dir");
  cfg.output_prefix = doc.has("output.prefix") ? doc.raw("output.prefix") : name;
  if (cfg.output_prefix.find('/') != std::string::npos) {
    doc.fail("output.prefix", "must be a plain file name stem");
  }

  if (uses_beam) parse_beam(doc, cfg);
  switch (cfg.command) {
    case Command::spectrum: parse_spectrum(doc, cfg.spectrum); break;
    case Command::ir: parse_ir(doc, cfg.ir); break;
    case Command::decohere: parse_decohere(doc, cfg.decohere); break;
    case Command::packet: parse_packet(doc, cfg.packet); break;
  }
  if (cfg.command == Command::packet && !(cfg.beam->gamma > 1.0)) {
    const std::string key = doc.has("beam.gamma") ? "beam.gamma" : doc.has("beam.beta") ? "beam.beta" : "beam.energy_gev";
    doc.fail(key, "invariant violation: packet command needs gamma > 1");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'", "", 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace synchrad
