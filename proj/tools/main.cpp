// hqom run <config> [--out DIR] [--quiet]
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hqom/cli.hpp"

namespace {

int fail(const char* kind, const std::string& message, const std::string& key, int code) {
  nlohmann::ordered_json e;
  e["error"] = kind;
  if (!key.empty()) e["key"] = key;
  e["message"] = message;
  std::cerr << e.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid qubit-optomechanics scenario runner"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;
  bool quiet = false;
  CLI::App* run = app.add_subcommand("run", "run a scenario config");
  run->add_option("config", config_path, "scenario config file")->required();
  run->add_option("--out", out_dir, "output directory (overrides out_dir in the config)");
  run->add_flag("--quiet", quiet, "no progress output");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 1;
  }

  try {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) return fail("validation", "cannot read config " + config_path, "config", 1);
    std::stringstream ss;
    ss << in.rdbuf();
    const hqom::cli::ScenarioConfig cfg = hqom::cli::parse_config(ss.str());
    const hqom::cli::RunResult r = hqom::cli::run_scenario(cfg, out_dir.empty() ? cfg.out_dir : out_dir, quiet);
    if (!quiet)
      for (const auto& f : r.files) std::cout << f.string() << '\n';
    return 0;
  } catch (const hqom::ValidationError& e) {
    return fail("validation", e.what(), e.key(), 1);
  } catch (const hqom::TruncationError& e) {
    return fail("truncation", e.what(), "", 2);
  } catch (const hqom::NumericalError& e) {
    return fail("numerical", e.what(), "", 2);
  } catch (const std::exception& e) {
    return fail("runtime", e.what(), "", 2);
  }
}
