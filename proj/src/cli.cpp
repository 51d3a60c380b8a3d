#include "hqom/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hqom/closed_dynamics.hpp"
#include "hqom/entanglement.hpp"
#include "hqom/nonclassical.hpp"

namespace hqom::cli {

namespace fs = std::filesystem;

namespace {

const std::vector<std::pair<Scenario, std::string>>& scenario_names() {
  static const std::vector<std::pair<Scenario, std::string>> names{
      {Scenario::fock_entanglement, "fock-entanglement"},
      {Scenario::coherent_entanglement, "coherent-entanglement"},
      {Scenario::thermal_entanglement, "thermal-entanglement"},
      {Scenario::open_sweep, "open-sweep"},
      {Scenario::cat_unconditional, "cat-unconditional"},
      {Scenario::cat_conditional, "cat-conditional"},
      {Scenario::kitten_fidelity, "kitten-fidelity"},
  };
  return names;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Plain decimal, optionally followed by "pi" (so "8pi", "2*pi" and "pi" work).
double parse_real(const std::string& key, const std::string& raw) {
  std::string v = trim(raw);
  double scale = 1.0;
  if (v.size() >= 2 && v.compare(v.size() - 2, 2, "pi") == 0) {
    scale = kPi;
    v = trim(v.substr(0, v.size() - 2));
    if (!v.empty() && v.back() == '*') v = trim(v.substr(0, v.size() - 1));
    if (v.empty()) v = "1";
  }
  double out = 0.0;
  const char* first = v.data();
  const char* last = v.data() + v.size();
  if (!v.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || !std::isfinite(out))
    throw ValidationError("invalid number '" + trim(raw) + "' for key " + key, key);
  return out * scale;
}

long long parse_integer(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    throw ValidationError("invalid integer '" + v + "' for key " + key, key);
  return out;
}

std::vector<double> parse_list(const std::string& key, const std::string& raw) {
  std::vector<double> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(key, item));
  if (out.empty()) throw ValidationError("empty list for key " + key, key);
  return out;
}

bool parse_bool(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ValidationError("invalid boolean '" + v + "' for key " + key, key);
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_number(v[i]);
  return out;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ValidationError(key + " " + what, key);
}

std::vector<double> time_grid(const ScenarioConfig& c) {
  std::vector<double> t(static_cast<std::size_t>(c.samples));
  const double step = (c.t_end - c.t_start) / static_cast<double>(c.samples - 1);
  for (Index i = 0; i < c.samples; ++i) t[static_cast<std::size_t>(i)] = c.t_start + step * static_cast<double>(i);
  t.back() = c.t_end;
  return t;
}

class Writer {
 public:
  explicit Writer(const fs::path& path) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw Error("cannot open " + path.string() + " for writing");
  }
  void line(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      if (!std::isfinite(v)) throw NumericalError("non-finite value in " + path_.filename().string());
      out_ << (first ? "" : ",") << format_number(v);
      first = false;
    }
    out_ << '\n';
  }
  void raw(const std::string& s) { out_ << s; }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
  std::ofstream out_;
};

void write_grid(const fs::path& path, const WignerGrid& g) {
  Writer w(path);
  std::ostringstream head;
  head << "# x: " << format_number(g.x(0)) << ' ' << format_number(g.x(g.x.size() - 1)) << ' ' << g.x.size() << '\n'
       << "# y: " << format_number(g.y(0)) << ' ' << format_number(g.y(g.y.size() - 1)) << ' ' << g.y.size() << '\n';
  w.raw(head.str());
  for (Index iy = 0; iy < g.values.rows(); ++iy) {
    std::string row;
    for (Index ix = 0; ix < g.values.cols(); ++ix) {
      if (ix) row += ' ';
      row += format_number(g.values(iy, ix));
    }
    w.raw(row + '\n');
  }
}

struct Context {
  const ScenarioConfig& cfg;
  fs::path dir;
  bool quiet;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
  std::vector<fs::path> files;

  void progress(const std::string& msg) const {
    if (!quiet) std::clog << "hqom: " << msg << '\n';
  }
};

Truncation truncation_of(const ScenarioConfig& c) {
  Truncation t;
  t.tail_tolerance = c.tail_tolerance;
  return t;
}

template <typename Evolve>
void run_time_series(Context& ctx, Evolve evolve) {
  Writer w(ctx.dir / "entanglement.csv");
  w.raw("t,neg_qc,neg_qo,neg_oc,intrinsic_qc\n");
  Index max_cav = 0, max_mech = 0;
  double max_discarded = 0.0;
  const auto times = time_grid(ctx.cfg);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const EntanglementRecord r = evolve(times[i], max_cav, max_mech, max_discarded);
    w.line({r.time, r.negativity_qc, r.negativity_qo, r.negativity_oc, r.intrinsic_qc});
    if (!ctx.quiet && (i % 50 == 0)) ctx.progress("t = " + format_number(times[i]));
  }
  ctx.files.push_back(w.path());
  ctx.details["truncation"] = {{"n_cav_max", max_cav}, {"n_mech_max", max_mech}};
  ctx.details["max_discarded_weight"] = max_discarded;
}

void note_space(const Space& s, double discarded, Index& cav, Index& mech, double& disc) {
  cav = std::max(cav, s.dim_of(Subsystem::cavity));
  mech = std::max(mech, s.dim_of(Subsystem::mechanics));
  disc = std::max(disc, discarded);
}

void run_fock(Context& ctx) {
  const Truncation tr = truncation_of(ctx.cfg);
  run_time_series(ctx, [&](double t, Index& cav, Index& mech, double& disc) {
    const PureState psi = evolve_fock_superposition(t, ctx.cfg.params, tr, ctx.cfg.n_mech);
    note_space(psi.space(), psi.discarded_weight(), cav, mech, disc);
    return entanglement_record(t, psi);
  });
}

void run_coherent(Context& ctx) {
  const Truncation tr = truncation_of(ctx.cfg);
  run_time_series(ctx, [&](double t, Index& cav, Index& mech, double& disc) {
    const PureState psi = evolve_coherent(t, ctx.cfg.params, tr, Dims{ctx.cfg.n_cav, ctx.cfg.n_mech});
    note_space(psi.space(), psi.discarded_weight(), cav, mech, disc);
    return entanglement_record(t, psi);
  });
}

void run_thermal(Context& ctx) {
  const Truncation tr = truncation_of(ctx.cfg);
  run_time_series(ctx, [&](double t, Index& cav, Index& mech, double& disc) {
    const StateEnsemble ens = evolve_thermal(t, ctx.cfg.params, tr, Dims{ctx.cfg.n_cav, ctx.cfg.n_mech});
    note_space(ens.space(), ens.discarded_weight(), cav, mech, disc);
    return entanglement_record(t, ens);
  });
}

void run_sweep(Context& ctx) {
  const ScenarioConfig& c = ctx.cfg;
  SweepSettings s;
  s.frame = c.frame;
  s.mech_init = c.mech_init;
  s.dt = c.dt;
  s.tail_tolerance = c.sweep_tail_tolerance;
  s.dims = Dims{c.n_cav, c.n_mech};
  Writer w(ctx.dir / "sweep.csv");
  w.raw("Gamma,gamma_phi,neg_qc_2pi\n");
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  Dims dims;
  double dt = 0.0, drift = 0.0, min_eig = 1.0;
  for (double G : c.Gamma_values)
    for (double gp : c.gamma_phi_values) {
      const double gl[] = {G};
      const double pl[] = {gp};
      const SweepResult r = negativity_sweep(gl, pl, c.params, s);
      const SweepCell& cell = r.cells.front();
      w.line({cell.Gamma, cell.gamma_phi, cell.neg_qc_2pi});
      ctx.progress("Gamma=" + format_number(G) + " gamma_phi=" + format_number(gp) +
                   " N_qc(2pi)=" + format_number(cell.neg_qc_2pi));
      dims = r.dims;
      dt = r.dt;
      drift = std::max(drift, r.max_trace_drift);
      min_eig = std::min(min_eig, r.min_eigenvalue);
    }
  ctx.files.push_back(w.path());
  ctx.details["truncation"] = {{"n_cav", dims.n_cav}, {"n_mech", dims.n_mech}};
  ctx.details["frame"] = c.frame == Frame::lab ? "lab" : "interaction";
  ctx.details["dt"] = dt;
  ctx.details["max_trace_drift"] = drift;
  ctx.details["min_eigenvalue"] = min_eig;
}

GridSpec grid_for(const ScenarioConfig& c) {
  GridSpec g = GridSpec::for_amplitude(c.params.alpha);
  if (c.grid_half_width > 0.0) g = GridSpec::square(c.grid_half_width, c.grid_points);
  g.nx = g.ny = c.grid_points;
  return g;
}

void emit_wigner(Context& ctx, const DensityMatrix& rho, const std::string& stem) {
  const WignerGrid g = wigner(rho, grid_for(ctx.cfg));
  const fs::path grid_path = ctx.dir / (stem + ".dat");
  write_grid(grid_path, g);
  ctx.files.push_back(grid_path);
  Writer w(ctx.dir / (stem + "_summary.csv"));
  w.raw("min_w,max_w,integral,lobes,purity\n");
  w.line({g.min(), g.max(), g.integral(), static_cast<double>(count_lobes(g)), rho.purity()});
  ctx.files.push_back(w.path());
  ctx.details["truncation"] = {{"n_cav", rho.space().dim()}};
  ctx.details["discarded_weight"] = rho.discarded_weight();
}

void run_cat(Context& ctx, bool conditional) {
  const ScenarioConfig& c = ctx.cfg;
  const CatCheck cat = cat_condition(c.params.g, c.l, c.p);
  ctx.details["cat_condition_residual"] = cat.residual;
  const DensityMatrix rho = conditional ? cavity_projected_plus(c.l, c.params, c.n_cav, c.tail_tolerance)
                                        : cavity_unconditional(c.l, c.params, c.n_cav, c.tail_tolerance);
  emit_wigner(ctx, rho, "wigner");
}

void run_kitten(Context& ctx) {
  const ScenarioConfig& c = ctx.cfg;
  Writer w(ctx.dir / "kitten.csv");
  w.raw("g,fidelity\n");
  const RVector gs = RVector::LinSpaced(c.scan_points, c.g_min, c.g_max);
  for (Index i = 0; i < gs.size(); ++i)
    w.line({gs(i), kitten_fidelity(gs(i), c.params.alpha, c.params.lambda, c.l, c.tail_tolerance)});
  ctx.files.push_back(w.path());

  const KittenOptimum opt =
      optimize_g_for_kitten(c.params.alpha, c.params.lambda, c.l, c.g_min, c.g_max, c.scan_points, c.tail_tolerance);
  Writer s(ctx.dir / "kitten_optimum.csv");
  s.raw("g_star,f_max,f_lower,f_upper,inconclusive\n");
  s.line({opt.g_star, opt.f_max, opt.f_lower, opt.f_upper, opt.inconclusive ? 1.0 : 0.0});
  ctx.files.push_back(s.path());

  ModelParams at = c.params;
  at.g = opt.g_star;
  emit_wigner(ctx, cavity_projected_plus(c.l, at, c.n_cav, c.tail_tolerance), "wigner");
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_string(Scenario s) {
  for (const auto& [k, name] : scenario_names())
    if (k == s) return name;
  return "unknown";
}

Scenario scenario_from_string(const std::string& name) {
  for (const auto& [k, n] : scenario_names())
    if (n == name) return k;
  throw ValidationError("unknown scenario '" + name + "'", "scenario");
}

void ScenarioConfig::validate() const {
  params.validate();
  require(samples >= 2, "samples", "must be >= 2");
  require(t_start >= 0.0, "t_start", "must be >= 0");
  require(t_end > t_start, "t_end", "must exceed t_start");
  require(l >= 1, "l", "must be >= 1");
  require(p >= 2, "p", "must be >= 2");
  require(n_cav >= 0, "n_cav", "must be >= 0");
  require(n_mech >= 0, "n_mech", "must be >= 0");
  require(tail_tolerance > 0.0 && tail_tolerance < 1.0, "tail_tolerance", "must lie in (0, 1)");
  require(sweep_tail_tolerance > 0.0 && sweep_tail_tolerance < 1.0, "sweep_tail_tolerance", "must lie in (0, 1)");
  require(dt >= 0.0, "dt", "must be >= 0");
  require(grid_points >= 2, "grid_points", "must be >= 2");
  require(grid_half_width >= 0.0, "grid_half_width", "must be >= 0");
  require(scan_points >= 3, "scan_points", "must be >= 3");
  require(g_min >= 0.0 && g_max > g_min && g_max <= 0.05, "g_max", "needs 0 <= g_min < g_max <= 0.05");
  for (double v : Gamma_values) require(v >= 0.0, "Gamma_values", "must be nonnegative");
  for (double v : gamma_phi_values) require(v >= 0.0, "gamma_phi_values", "must be nonnegative");
  if (scenario == Scenario::open_sweep) {
    require(!Gamma_values.empty(), "Gamma_values", "must not be empty");
    require(!gamma_phi_values.empty(), "gamma_phi_values", "must not be empty");
  }
}

std::vector<std::pair<std::string, std::string>> ScenarioConfig::echo() const {
  const Rates& r = params.rates;
  return {
      {"scenario", to_string(scenario)},
      {"g", format_number(params.g)},
      {"lambda", format_number(params.lambda)},
      {"alpha", format_number(params.alpha.real())},
      {"beta", format_number(params.beta.real())},
      {"nbar", format_number(params.nbar_mech)},
      {"kappa", format_number(r.kappa)},
      {"gamma_m", format_number(r.gamma_m)},
      {"Gamma", format_number(r.Gamma)},
      {"Gamma_phi", format_number(r.Gamma_phi)},
      {"n_th", format_number(r.n_th)},
      {"n_q", format_number(r.qubit_occupancy())},
      {"common_reservoir", r.common_reservoir ? "true" : "false"},
      {"t_start", format_number(t_start)},
      {"t_end", format_number(t_end)},
      {"samples", std::to_string(samples)},
      {"l", std::to_string(l)},
      {"p", std::to_string(p)},
      {"out_dir", out_dir},
      {"seed", std::to_string(seed)},
      {"n_cav", std::to_string(n_cav)},
      {"n_mech", std::to_string(n_mech)},
      {"tail_tolerance", format_number(tail_tolerance)},
      {"Gamma_values", join(Gamma_values)},
      {"gamma_phi_values", join(gamma_phi_values)},
      {"frame", frame == Frame::lab ? "lab" : "interaction"},
      {"mech_init", mech_init == MechanicsInit::coherent ? "coherent" : "thermal"},
      {"dt", format_number(dt)},
      {"sweep_tail_tolerance", format_number(sweep_tail_tolerance)},
      {"grid_half_width", format_number(grid_half_width)},
      {"grid_points", std::to_string(grid_points)},
      {"g_min", format_number(g_min)},
      {"g_max", format_number(g_max)},
      {"scan_points", std::to_string(scan_points)},
  };
}

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig c;
  Rates& r = c.params.rates;
  bool have_scenario = false;
  bool have_n_q = false;

  using Setter = std::function<void(const std::string&, const std::string&)>;
  auto real = [](double& dst) -> Setter { return [&dst](const std::string& k, const std::string& v) { dst = parse_real(k, v); }; };
  auto cplx = [](Complex& dst) -> Setter {
    return [&dst](const std::string& k, const std::string& v) { dst = Complex(parse_real(k, v), 0.0); };
  };
  auto index = [](Index& dst) -> Setter {
    return [&dst](const std::string& k, const std::string& v) { dst = static_cast<Index>(parse_integer(k, v)); };
  };
  auto integer = [](int& dst) -> Setter {
    return [&dst](const std::string& k, const std::string& v) {
      const long long x = parse_integer(k, v);
      if (x < -1000000 || x > 1000000) throw ValidationError(k + " out of range", k);
      dst = static_cast<int>(x);
    };
  };
  auto list = [](std::vector<double>& dst) -> Setter {
    return [&dst](const std::string& k, const std::string& v) { dst = parse_list(k, v); };
  };

  const std::map<std::string, Setter> setters{
      {"scenario", [&](const std::string&, const std::string& v) { c.scenario = scenario_from_string(trim(v)); have_scenario = true; }},
      {"g", real(c.params.g)},
      {"lambda", real(c.params.lambda)},
      {"alpha", cplx(c.params.alpha)},
      {"beta", cplx(c.params.beta)},
      {"nbar", real(c.params.nbar_mech)},
      {"kappa", real(r.kappa)},
      {"gamma_m", real(r.gamma_m)},
      {"Gamma", real(r.Gamma)},
      {"Gamma_phi", real(r.Gamma_phi)},
      {"n_th", real(r.n_th)},
      {"n_q", [&](const std::string& k, const std::string& v) { r.n_q = parse_real(k, v); have_n_q = true; }},
      {"common_reservoir", [&](const std::string& k, const std::string& v) { r.common_reservoir = parse_bool(k, v); }},
      {"t_start", real(c.t_start)},
      {"t_end", real(c.t_end)},
      {"samples", index(c.samples)},
      {"l", integer(c.l)},
      {"p", integer(c.p)},
      {"out_dir", [&](const std::string&, const std::string& v) { c.out_dir = trim(v); }},
      {"seed", [&](const std::string& k, const std::string& v) {
         const long long s = parse_integer(k, v);
         if (s < 0) throw ValidationError("seed must be nonnegative", k);
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"n_cav", index(c.n_cav)},
      {"n_mech", index(c.n_mech)},
      {"tail_tolerance", real(c.tail_tolerance)},
      {"Gamma_values", list(c.Gamma_values)},
      {"gamma_phi_values", list(c.gamma_phi_values)},
      {"frame", [&](const std::string& k, const std::string& v) {
         const std::string f = trim(v);
         if (f == "lab") c.frame = Frame::lab;
         else if (f == "interaction") c.frame = Frame::interaction;
         else throw ValidationError("frame must be lab or interaction", k);
       }},
      {"mech_init", [&](const std::string& k, const std::string& v) {
         const std::string f = trim(v);
         if (f == "coherent") c.mech_init = MechanicsInit::coherent;
         else if (f == "thermal") c.mech_init = MechanicsInit::thermal;
         else throw ValidationError("mech_init must be coherent or thermal", k);
       }},
      {"dt", real(c.dt)},
      {"sweep_tail_tolerance", real(c.sweep_tail_tolerance)},
      {"grid_half_width", real(c.grid_half_width)},
      {"grid_points", index(c.grid_points)},
      {"g_min", real(c.g_min)},
      {"g_max", real(c.g_max)},
      {"scan_points", index(c.scan_points)},
  };

  c.params.alpha = 2.0;
  c.params.beta = 2.0;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("line " + std::to_string(line_no) + ": expected key = value", "line " + std::to_string(line_no));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) throw ValidationError("unknown key '" + key + "'", key);
    if (!seen.insert(key).second) throw ValidationError("duplicate key '" + key + "'", key);
    if (value.empty()) throw ValidationError("missing value for key " + key, key);
    it->second(key, value);
  }
  if (!have_scenario) throw ValidationError("missing scenario", "scenario");
  if (have_n_q && r.common_reservoir && r.n_q != r.n_th)
    throw ValidationError("n_q differs from n_th while common_reservoir = true", "n_q");
  if (c.scenario == Scenario::open_sweep) {
    if (c.Gamma_values.empty()) c.Gamma_values = {1e-5, 1e-4, 1e-3, 1e-2};
    if (c.gamma_phi_values.empty()) c.gamma_phi_values = {1e-4, 1e-3, 1e-2, 1e-1};
  }
  c.validate();
  return c;
}

RunResult run_scenario(const ScenarioConfig& config, const fs::path& out_dir, bool quiet) {
  config.validate();
  fs::create_directories(out_dir);
  const auto start = std::chrono::steady_clock::now();
  Context ctx{config, out_dir, quiet, nlohmann::ordered_json::object(), {}};
  ctx.progress("running " + to_string(config.scenario) + " into " + out_dir.string());

  switch (config.scenario) {
    case Scenario::fock_entanglement:
      run_fock(ctx);
      break;
    case Scenario::coherent_entanglement:
      run_coherent(ctx);
      break;
    case Scenario::thermal_entanglement:
      run_thermal(ctx);
      break;
    case Scenario::open_sweep:
      run_sweep(ctx);
      break;
    case Scenario::cat_unconditional:
      run_cat(ctx, false);
      break;
    case Scenario::cat_conditional:
      run_cat(ctx, true);
      break;
    case Scenario::kitten_fidelity:
      run_kitten(ctx);
      break;
  }

  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  nlohmann::ordered_json m;
  m["library"] = "hqom";
  m["version"] = HQOM_VERSION;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config.echo()) cfg[k] = v;
  m["config"] = cfg;
  for (auto& [k, v] : ctx.details.items()) m[k] = v;
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  for (const auto& f : ctx.files) files.push_back(f.filename().string());
  m["files"] = files;
  m["wall_clock_seconds"] = seconds;

  RunResult result{ctx.files, out_dir / "manifest.json"};
  std::ofstream mf(result.manifest, std::ios::binary);
  if (!mf) throw Error("cannot write " + result.manifest.string());
  mf << m.dump(2) << '\n';
  ctx.progress("done in " + format_number(seconds) + " s");
  return result;
}

}  // namespace hqom::cli
