#include "polariton/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "polariton/config.hpp"
#include "polariton/csv.hpp"
#include "polariton/observables.hpp"

#ifndef POLARITON_VERSION
#define POLARITON_VERSION "0.0.0"
#endif

namespace polariton::cli {

namespace {

using nlohmann::json;

constexpr double kWeakProbeBeta = 0.005;

const std::vector<std::string>& boolean_keys() {
  static const std::vector<std::string> keys{"hard_core_pair", "atomic_decay"};
  return keys;
}

std::string dashed(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

json params_json(const PhysicalParams& p) {
  json j{{"n_atoms", p.n_atoms}, {"g", p.g},         {"kappa", p.kappa},
         {"gamma_e", p.gamma_e}, {"gamma_r", p.gamma_r}, {"chi_bar", p.chi_bar},
         {"cos_theta", p.cos_theta}, {"beta", p.beta},   {"delta", p.delta}};
  if (p.control_rabi) j["control_rabi"] = *p.control_rabi;
  return j;
}

json derived_json(const DerivedParams& d) {
  return {{"cos_theta", d.cos_theta},
          {"sin_theta", d.sin_theta},
          {"control_rabi", d.control_rabi},
          {"e0", d.e0},
          {"e1", d.e1},
          {"e2", d.e2},
          {"k0", d.k0},
          {"k1", d.k1},
          {"k2", d.k2},
          {"omega_drive_0", d.omega_drive_0},
          {"omega_drive_1", d.omega_drive_1},
          {"omega_drive_2", d.omega_drive_2},
          {"lambda_blockade", d.lambda_blockade},
          {"chi_bright_bright", d.chi_bright_bright},
          {"chi_dark_bright", d.chi_dark_bright},
          {"rwa_margin", d.rwa_margin}};
}

json integrator_json(const IntegratorConfig& c) {
  return {{"t_start", c.t_start}, {"t_end", c.t_end}, {"stride", c.output_stride},
          {"rtol", c.rtol},       {"atol", c.atol},   {"max_step", c.max_step},
          {"max_steps", c.max_steps}};
}

json stats_json(const StepStatistics& s) {
  return {{"accepted", s.accepted}, {"rejected", s.rejected}, {"evaluations", s.evaluations}};
}

json truncation_json(const Truncation& t) {
  json caps = json::object();
  for (Mode m : kAllModes) {
    const auto& cap = t.mode_caps[static_cast<std::size_t>(m)];
    caps[mode_name(m)] = cap ? json(*cap) : json(nullptr);
  }
  return {{"n_tot_max", t.n_tot_max}, {"mode_caps", caps}};
}

class OutputWriter {
 public:
  explicit OutputWriter(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void prepare() const {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec || !std::filesystem::is_directory(dir_)) {
      throw ConfigError("key 'out_dir': cannot create directory '" + dir_.string() + "'");
    }
    const auto probe = dir_ / ".write_probe";
    {
      std::ofstream test(probe);
      if (!test) throw ConfigError("key 'out_dir': directory '" + dir_.string() + "' is not writable");
    }
    std::filesystem::remove(probe, ec);
  }

  template <class WriteFn>
  std::filesystem::path write(const std::string& file_name, WriteFn&& fn) const {
    const auto path = dir_ / file_name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    fn(os);
    os.flush();
    if (!os) throw std::runtime_error("failed writing '" + path.string() + "'");
    return path;
  }

  void write_meta(const std::filesystem::path& data_file, json meta) const {
    meta["output"] = data_file.filename().string();
    const auto name = data_file.stem().string() + ".meta.json";
    write(name, [&](std::ostream& os) { os << meta.dump(2) << '\n'; });
  }

 private:
  std::filesystem::path dir_;
};

json base_meta(const RunConfig& cfg, const PhysicalParams& params) {
  json meta;
  meta["tool"] = "polariton_sim";
  meta["version"] = version();
  meta["mode"] = run_mode_name(cfg.mode);
  meta["parameters"] = params_json(params);
  meta["derived"] = derived_json(derive_params(params));
  meta["units"] = unit_label(cfg.units);
  return meta;
}

int run_feasibility(const RunConfig& cfg, const OutputWriter& writer, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const FeasibilityReport report = feasibility_report(cfg.physical, cfg.threshold, cfg.units);
  out << format_table(report);
  const auto path =
      writer.write("feasibility.csv", [&](std::ostream& os) { write_feasibility_csv(os, report); });
  json meta = base_meta(cfg, cfg.physical);
  meta["threshold"] = cfg.threshold;
  meta["all_pass"] = report.all_pass();
  meta["wall_time_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  writer.write_meta(path, meta);
  return kExitOk;
}

int run_simulate(const RunConfig& cfg, const OutputWriter& writer, std::ostream& out,
                 std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  const DerivedParams dp = derive_params(cfg.physical);
  const Basis basis(cfg.truncation());
  const HamiltonianTerms h =
      build_hamiltonian(cfg.resolved_hamiltonian(), dp, basis, cfg.atomic_decay);
  for (const auto& w : h.warnings) err << "warning: " << w << '\n';

  const Trajectory traj = evolve_schrodinger(h, basis.vacuum(), cfg.integrator, cfg.execution);
  const PopulationSeries series = population_series(traj, basis, dp);
  const auto path = writer.write("trajectory.csv",
                                 [&](std::ostream& os) { write_csv(os, trajectory_table(series)); });

  const double g2 = g2_zero(traj, basis, cfg.window);
  const double n0_mean = window_average(series.times, series.n0, cfg.window);
  const double n0_max = *std::max_element(series.n0.begin(), series.n0.end());
  const double n1_max = *std::max_element(series.n1.begin(), series.n1.end());
  const double n2_max = *std::max_element(series.n2.begin(), series.n2.end());
  const auto period = oscillation_period(series.times, series.n0);

  out << "g2(0)   " << format_number(g2) << '\n'
      << "n0_mean " << format_number(n0_mean) << '\n'
      << "n0_max  " << format_number(n0_max) << '\n'
      << "n1_max  " << format_number(n1_max) << '\n'
      << "n2_max  " << format_number(n2_max) << '\n';

  json meta = base_meta(cfg, cfg.physical);
  meta["hamiltonian"] = hamiltonian_kind_name(cfg.resolved_hamiltonian());
  meta["atomic_decay"] = cfg.atomic_decay;
  meta["truncation"] = truncation_json(cfg.truncation());
  meta["basis_dimension"] = basis.size();
  meta["integrator"] = integrator_json(cfg.integrator);
  meta["step_statistics"] = stats_json(traj.stats);
  meta["window"] = cfg.window;
  meta["initial_state"] = "vacuum";
  meta["summary"] = {{"g2", std::isfinite(g2) ? json(g2) : json(nullptr)},
                     {"n0_mean", n0_mean},
                     {"n0_max", n0_max},
                     {"n1_max", n1_max},
                     {"n2_max", n2_max},
                     {"n0_period", period ? json(*period) : json(nullptr)}};
  meta["warnings"] = h.warnings;
  meta["wall_time_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  writer.write_meta(path, meta);
  return kExitOk;
}

int run_sweep(const RunConfig& cfg, const OutputWriter& writer, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const GridSpec grid = cfg.grid.value_or(GridSpec{linspace(0.04, 0.3, 14), "0.04:0.3:14"});
  SweepConfig sc;
  sc.kind = cfg.resolved_hamiltonian();
  sc.atomic_decay = cfg.atomic_decay;
  sc.truncation = cfg.truncation();
  sc.integrator = cfg.integrator;
  sc.window_fraction = cfg.window;
  sc.execution = cfg.execution;
  const SweepResult result = sweep_costheta(cfg.physical, grid.values, sc);

  const auto path =
      writer.write("sweep.csv", [&](std::ostream& os) { write_csv(os, sweep_table(result)); });
  for (const auto& p : result.points) {
    out << "cos_theta " << format_number(p.grid_value) << "  g2 " << format_number(p.g2) << '\n';
  }
  out << "g2 strictly increasing: " << (result.g2_strictly_increasing ? "yes" : "no") << '\n';

  json meta = base_meta(cfg, cfg.physical);
  meta["hamiltonian"] = hamiltonian_kind_name(sc.kind);
  meta["atomic_decay"] = sc.atomic_decay;
  meta["truncation"] = truncation_json(sc.truncation);
  meta["integrator"] = integrator_json(sc.integrator);
  meta["window"] = sc.window_fraction;
  meta["grid"] = grid.values;
  meta["grid_spec"] = grid.text;
  meta["g2_strictly_increasing"] = result.g2_strictly_increasing;
  meta["note"] = "parameters.cos_theta is overridden per row by the grid";
  meta["wall_time_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  writer.write_meta(path, meta);
  return kExitOk;
}

int run_spectrum(const RunConfig& cfg, const OutputWriter& writer, std::ostream& out,
                 std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  PhysicalParams params = cfg.physical;
  std::vector<std::string> warnings;
  if (!cfg.beta_given) {
    params.beta = kWeakProbeBeta;
    warnings.push_back("beta not given; using the weak-probe value " +
                       format_number(kWeakProbeBeta));
  }
  const DerivedParams dp = derive_params(params);
  const GridSpec grid = cfg.grid.value_or(
      GridSpec{default_spectrum_grid(dp, cfg.atomic_decay), "composite default"});

  SpectrumConfig sc;
  sc.truncation = cfg.truncation();
  sc.integrator = cfg.integrator;
  sc.settle_factor = cfg.settle_factor;
  sc.horizon = cfg.horizon;
  sc.atomic_decay = cfg.atomic_decay;
  sc.execution = cfg.execution;
  sc.window_fraction = cfg.window;
  const SweepResult result = transmission_spectrum(params, grid.values, sc, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << '\n';

  const auto path =
      writer.write("spectrum.csv", [&](std::ostream& os) { write_csv(os, spectrum_table(result)); });
  const auto x = result.grid();
  const auto y = result.column(&SweepPoint::photon_number);
  json peaks = json::array();
  for (const auto& pk : find_peaks(x, y)) {
    const auto width = full_width_half_max(x, y, pk.index);
    peaks.push_back({{"position", pk.position},
                     {"height", pk.height},
                     {"fwhm", width ? json(*width) : json(nullptr)}});
    out << "peak at delta " << format_number(pk.position) << "  height "
        << format_number(pk.height) << "  fwhm " << (width ? format_number(*width) : "n/a")
        << '\n';
  }

  json meta = base_meta(cfg, params);
  meta["hamiltonian"] = "eit";
  meta["atomic_decay"] = sc.atomic_decay;
  meta["truncation"] = truncation_json(sc.truncation);
  meta["integrator"] = integrator_json(sc.integrator);
  meta["window"] = sc.window_fraction;
  meta["settle_rule"] = {{"settle_factor", sc.settle_factor},
                         {"settle_weight", sc.settle_weight},
                         {"horizon", sc.horizon},
                         {"description",
                          "t_end = min(settle_factor / slowest linewidth among polaritons "
                          "carrying >= settle_weight of the linear-response photon number, "
                          "horizon)"}};
  meta["t_end_per_point"] = result.column(&SweepPoint::t_end);
  meta["grid_spec"] = grid.text;
  meta["peaks"] = peaks;
  meta["warnings"] = warnings;
  meta["wall_time_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  writer.write_meta(path, meta);
  return kExitOk;
}

}  // namespace

std::string version() { return POLARITON_VERSION; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Photon-blockade simulator for intracavity EIT with Rydberg polaritons",
               "polariton_sim"};
  app.set_version_flag("--version", version());

  std::string mode_positional;
  std::string config_path;
  app.add_option("command", mode_positional, "simulate | sweep | spectrum | feasibility");
  app.add_option("--config", config_path, "TOML run file");

  std::map<std::string, std::string> flag_values;
  for (const auto& key : config_keys()) {
    const bool is_bool = std::find(boolean_keys().begin(), boolean_keys().end(), key) !=
                         boolean_keys().end();
    if (is_bool) {
      app.add_flag("--" + dashed(key) + "{true}", flag_values[key],
                   "set " + key + " (accepts =true/=false)");
    } else {
      app.add_option("--" + dashed(key), flag_values[key], "override config key " + key);
    }
  }
  app.add_flag("--bosonic-pair{false}", flag_values["hard_core_pair"],
               "allow pair occupations up to the weight cap");
  app.add_flag("--no-atomic-decay{false}", flag_values["atomic_decay"],
               "drop the atomic decay terms");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) {
      for (const auto& entry : load_config_file(config_path)) apply_entry(cfg, entry);
    }
    for (const auto& key : config_keys()) {
      const auto it = flag_values.find(key);
      if (it == flag_values.end() || it->second.empty()) continue;
      ConfigValue value = parse_flag_value(it->second);
      // Flags keep strings for grid specs and paths.
      if (key == "grid" || key == "out_dir") value = it->second;
      apply_entry(cfg, {key, value, "--" + dashed(key)});
    }
    if (!mode_positional.empty()) {
      const RunMode m = parse_run_mode(mode_positional);
      if (!flag_values["mode"].empty() && parse_run_mode(flag_values["mode"]) != m) {
        throw ConfigError("positional mode and --mode disagree");
      }
      cfg.mode = m;
    }
    validate(cfg);

    const OutputWriter writer(cfg.out_dir);
    writer.prepare();
    switch (cfg.mode) {
      case RunMode::feasibility: return run_feasibility(cfg, writer, out);
      case RunMode::simulate: return run_simulate(cfg, writer, out, err);
      case RunMode::sweep: return run_sweep(cfg, writer, out);
      case RunMode::spectrum: return run_spectrum(cfg, writer, out, err);
    }
    return kExitFailure;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << " (t = " << e.time() << ")\n";
    return kExitNumericalError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace polariton::cli
