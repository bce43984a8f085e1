#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"
#include "synchrad/config.hpp"
#include "synchrad/errors.hpp"
#include "synchrad/run.hpp"

using namespace synchrad;
namespace fs = std::filesystem;

namespace {

// Fresh scratch directory per call, removed by the destructor.
struct Scratch {
  fs::path dir;
  Scratch() {
    static int counter = 0;
    dir = fs::temp_directory_path() / ("synchrad_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

// Runs the command-line tool; returns its exit status.
int run_tool(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(SYNCHRAD_CLI_PATH) + " " + args + " >" + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ConfigError parse_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("no ConfigError for:\n" << text);
  return ConfigError("", "", 0);
}

}  // namespace

TEST_CASE("config round trip in lab units") {
  const RunConfig cfg = parse_config(
      "# ring\n"
      "command = spectrum\n"
      "beam.energy_gev = 0.68\n"
      "beam.radius_m = 2   # metres\n"
      "spectrum.n_max = 5\n");
  CHECK(cfg.command == Command::spectrum);
  REQUIRE(cfg.lab);
  CHECK(cfg.lab->energy_GeV == 0.68);
  CHECK(cfg.lab->radius_m == 2.0);
  REQUIRE(cfg.beam);
  CHECK(cfg.beam->gamma == doctest::Approx(0.68 / kElectronRestGeV).epsilon(1e-15));
  CHECK(cfg.spectrum.n_max == 5);
  CHECK(cfg.spectrum.n_min == 1);
  CHECK(cfg.output_prefix == "spectrum");
  REQUIRE(cfg.entries.size() == 4);
  CHECK(cfg.entries[1].first == "beam.energy_gev");
  CHECK(cfg.entries[1].second == "0.68");
}

TEST_CASE("config diagnostics name the key and line") {
  ConfigError e = parse_error("beam.gamma = 2\nbeam.radius_bohr = 10\n");
  CHECK(e.key() == "command");

  e = parse_error("command = spectrum\nbeam.beta = 1.2\nbeam.radius_bohr = 10\n");
  CHECK(e.key() == "beam.beta");
  CHECK(e.line() == 2);

  e = parse_error("command = spectrum\nbeam.gama = 2\n");
  CHECK(e.key() == "beam.gama");
  CHECK(e.line() == 2);

  e = parse_error("command = spectrum\nbeam.gamma = 2\nbeam.gamma = 3\nbeam.radius_bohr = 1\n");
  CHECK(e.key() == "beam.gamma");
  CHECK(e.line() == 3);

  e = parse_error("command = spectrum\nbeam.gamma = 2\nbeam.beta = 0.5\nbeam.radius_bohr = 1\n");
  CHECK(e.line() > 0);

  e = parse_error("command = spectrum\nbeam.gamma = 2\nbeam.radius_bohr = 1\nir.points = 5\n");
  CHECK(e.key() == "ir.points");
  CHECK(e.line() == 4);

  e = parse_error("command = spectrum\nbeam.gamma = two\nbeam.radius_bohr = 1\n");
  CHECK(e.key() == "beam.gamma");

  e = parse_error("command = orbit\n");
  CHECK(e.key() == "command");

  e = parse_error("command = packet\nbeam.gamma = 1\nbeam.radius_bohr = 1\n");
  CHECK(e.line() > 0);

  e = parse_error("command = decohere\nbeam.gamma = 2\nbeam.radius_bohr = 1\n");
  CHECK(e.key() == "decohere.t_au");
}

TEST_CASE("field strength fixes the radius") {
  const RunConfig cfg = parse_config("command = packet\nbeam.gamma = 3\nbeam.field_tesla = 1.5\n");
  REQUIRE(cfg.beam);
  const double R = cfg.beam->beta * cfg.beam->gamma * kSpeedOfLight / (1.5 / kTeslaPerAtomicField);
  CHECK(cfg.beam->R == doctest::Approx(R).epsilon(1e-14));
}

TEST_CASE("spectrum run") {
  Scratch s;
  RunConfig cfg = parse_config("command = spectrum\nbeam.gamma = 2\nbeam.radius_bohr = 1000\nspectrum.n_max = 4\n"
                               "spectrum.theta_points = 7\n");
  std::ostringstream err;
  const RunResult r = run(cfg, {s.dir.string(), 1, true}, err);
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.files.size() == 2);
  const std::string csv = read_file(s.dir / "spectrum.csv");
  CHECK(csv.rfind("n,theta_rad,rate_au\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 4 * 7);
  CHECK(csv.find('\r') == std::string::npos);
  const auto j = nlohmann::json::parse(read_file(s.dir / "spectrum.json"));
  CHECK(j["total_power"].get<double>() == doctest::Approx(oracle::larmor_power(2.0, 1000.0)).epsilon(0.01));
  CHECK_FALSE(j.contains("elapsed_s"));
}

TEST_CASE("ir run with no velocity change writes zeros") {
  Scratch s;
  const RunConfig cfg = parse_config("command = ir\nir.beta1 = 0.1, 0, 0\nir.beta2 = 0.1, 0, 0\nir.points = 5\n");
  std::ostringstream err;
  REQUIRE(run(cfg, {s.dir.string(), 1, true}, err).exit_code == 0);
  std::istringstream csv(read_file(s.dir / "ir.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "omega_au,dN_domega");
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    CHECK(line.substr(line.find(',') + 1) == "0");
  }
  CHECK(rows == 5);
}

TEST_CASE("packet run reports the packet fields") {
  Scratch s;
  const RunConfig cfg = parse_config("command = packet\nbeam.energy_gev = 0.68\nbeam.radius_m = 2\n");
  std::ostringstream err;
  REQUIRE(run(cfg, {s.dir.string(), 1, true}, err).exit_code == 0);
  const auto j = nlohmann::json::parse(read_file(s.dir / "packet.json"));
  for (const char* k : {"gamma", "n1_mean", "drho_m", "dphi", "arc_m", "tau1_s", "lambda"}) CHECK(j.contains(k));
  CHECK(j["n1_mean"].get<double>() == doctest::Approx(3.4e15).epsilon(0.02));
}

TEST_CASE("number format") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-2.5e-300) == "-2.5e-300");
  CHECK(std::stod(format_number(-2.5e-300)) == -2.5e-300);
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("command-line tool") {
  Scratch s;
  const fs::path cfg = s.dir / "run.cfg";
  write_file(cfg, "command = ir\nir.beta1 = 0.1, 0, 0\nir.beta2 = 0.1, 0.02, 0\nir.points = 4\noutput.prefix = jump\n");

  SUBCASE("deterministic runs are byte-identical") {
    REQUIRE(run_tool("--config " + cfg.string() + " --out " + (s.dir / "a").string() + " --deterministic", s.dir / "log") == 0);
    REQUIRE(run_tool("--config " + cfg.string() + " --out " + (s.dir / "b").string() + " --deterministic --threads 2",
                     s.dir / "log") == 0);
    for (const char* f : {"jump.csv", "jump.json"}) {
      const std::string a = read_file(s.dir / "a" / f);
      CHECK_FALSE(a.empty());
      CHECK(a == read_file(s.dir / "b" / f));
    }
  }

  SUBCASE("config errors exit nonzero with a JSON diagnostic") {
    const fs::path bad = s.dir / "bad.cfg";
    write_file(bad, "command = spectrum\nbeam.beta = 1.2\nbeam.radius_bohr = 10\n");
    CHECK(run_tool("--config " + bad.string(), s.dir / "log") == kExitConfig);
    const auto j = nlohmann::json::parse(read_file(s.dir / "log"));
    CHECK(j["error"] == "config");
    CHECK(j["key"] == "beam.beta");
    CHECK(j["line"] == 2);
  }

  SUBCASE("missing file and bad flags") {
    CHECK(run_tool("--config " + (s.dir / "none.cfg").string(), s.dir / "log") == kExitConfig);
    CHECK(nlohmann::json::parse(read_file(s.dir / "log")).contains("error"));
    CHECK(run_tool("--config " + cfg.string() + " --threads 0", s.dir / "log") == kExitConfig);
    CHECK(run_tool("", s.dir / "log") == kExitConfig);
  }

  SUBCASE("an unwritable output directory is an io error") {
    const int code = run_tool("--config " + cfg.string() + " --out " + (cfg / "sub").string(), s.dir / "log");
    CHECK(code == kExitIo);
    const auto j = nlohmann::json::parse(read_file(s.dir / "log"));
    CHECK(j["error"] == "io");
    CHECK(j["module"] == "ir_model");
  }
}

TEST_CASE("run-time errors write an error file") {
  Scratch s;
  RunConfig cfg = parse_config("command = ir\nir.beta1 = 0.1, 0, 0\nir.beta2 = 0.1, 0.02, 0\nir.q_c = 5\n");
  cfg.ir.q_c = -1.0;
  std::ostringstream err;
  const RunResult r = run(cfg, {s.dir.string(), 1, true}, err);
  CHECK(r.exit_code == kExitDomain);
  const auto j = nlohmann::json::parse(read_file(s.dir / "ir.error.json"));
  CHECK(j["error"] == "domain");
  CHECK(j["module"] == "ir_model");
  CHECK(j["parameters"]["ir.q_c"] == "5");
  CHECK(nlohmann::json::parse(err.str()) == j);
  CHECK_FALSE(fs::exists(s.dir / "ir.csv"));
}
