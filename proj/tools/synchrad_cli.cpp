#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "synchrad/config.hpp"
#include "synchrad/errors.hpp"
#include "synchrad/run.hpp"

namespace {

int threads_from_env() {
  const char* env = std::getenv("SYNCHRAD_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  try {
    std::size_t used = 0;
    const int n = std::stoi(env, &used);
    if (used == std::string(env).size() && n >= 1) return n;
  } catch (const std::exception&) {
  }
  throw synchrad::ConfigError("SYNCHRAD_THREADS must be a positive integer", "SYNCHRAD_THREADS", 0);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synchrotron radiation toolkit: batch runs driven by a key = value config."};
  std::string config_path;
  synchrad::RunOptions options;
  int threads = 0;
  app.add_option("--config", config_path, "Run configuration file")->required();
  app.add_option("--out", options.out_dir, "Output directory (overrides output.dir)");
  app.add_option("--threads", threads, "Worker threads (default: SYNCHRAD_THREADS or 1)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--deterministic", options.deterministic, "Byte-identical output: omit timing fields");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    const synchrad::ConfigError err(std::string("command line: ") + e.what(), "", 0);
    std::cerr << synchrad::error_json(err, "cli", {});
    return synchrad::kExitConfig;
  }

  synchrad::RunConfig config;
  try {
    options.threads = threads > 0 ? threads : threads_from_env();
    config = synchrad::load_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << synchrad::error_json(e, "cli", {{"config", config_path}});
    return synchrad::exit_code_for(e);
  }
  const synchrad::RunResult result = synchrad::run(config, options, std::cerr);
  for (const std::string& f : result.files) std::cout << f << "\n";
  return result.exit_code;
}
