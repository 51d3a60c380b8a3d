#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "hqom/lindblad.hpp"
#include "hqom/params.hpp"

namespace hqom::cli {

enum class Scenario {
  fock_entanglement,
  coherent_entanglement,
  thermal_entanglement,
  open_sweep,
  cat_unconditional,
  cat_conditional,
  kitten_fidelity,
};

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& name);

struct ScenarioConfig {
  Scenario scenario = Scenario::coherent_entanglement;
  ModelParams params;
  double t_start = 0.0;
  double t_end = 4.0 * kPi;
  Index samples = 400;
  int l = 1;
  int p = 2;
  std::string out_dir = "out";
  std::uint64_t seed = 0;  // reserved; every computation is deterministic

  // truncation overrides, 0 = automatic
  Index n_cav = 0;
  Index n_mech = 0;
  double tail_tolerance = 1e-10;

  // open-sweep
  std::vector<double> Gamma_values;
  std::vector<double> gamma_phi_values;
  Frame frame = Frame::interaction;
  MechanicsInit mech_init = MechanicsInit::coherent;
  double dt = 0.0;
  double sweep_tail_tolerance = 1e-6;

  // Wigner scenarios; half width 0 = |alpha| + 4
  double grid_half_width = 0.0;
  Index grid_points = 201;

  // kitten-fidelity
  double g_min = 0.0;
  double g_max = 0.03;
  Index scan_points = 301;

  /// Every key with the value actually used, in a fixed order.
  std::vector<std::pair<std::string, std::string>> echo() const;
  void validate() const;
};

/// Parses `key = value` lines with `#` comments. Unknown keys, duplicates and
/// malformed values raise ValidationError naming the key.
ScenarioConfig parse_config(const std::string& text);

struct RunResult {
  std::vector<std::filesystem::path> files;
  std::filesystem::path manifest;
};

/// Runs a scenario, writing data files and manifest.json into `out_dir`.
RunResult run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir, bool quiet = true);

/// 17 significant digits, shortest exponent form chosen by %.17g.
std::string format_number(double v);

}  // namespace hqom::cli
