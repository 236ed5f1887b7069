#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "polariton/dormand_prince.hpp"
#include "polariton/hamiltonian.hpp"
#include "polariton/model.hpp"
#include "polariton/parallel.hpp"

namespace polariton {

/// Bad configuration: unknown key, wrong type, out-of-range value or a
/// syntax error. The message names the source location and the key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ConfigValue = std::variant<double, bool, std::string, std::vector<double>>;

struct ConfigEntry {
  std::string key;  // bare key; [section] headers only group entries
  ConfigValue value;
  std::string origin;  // "file.toml:12" or "--cos-theta"
};

/// Parses the flat TOML subset used for run files: `key = value` lines,
/// `#` comments, `[section]` headers, numbers, booleans, basic strings and
/// one-line numeric arrays. Duplicate keys are rejected.
[[nodiscard]] std::vector<ConfigEntry> parse_config(std::string_view text,
                                                    const std::string& source_name);
[[nodiscard]] std::vector<ConfigEntry> load_config_file(const std::filesystem::path& path);

/// Reads a command-line value with the same literal rules; anything that is
/// not a number, boolean or array is taken as a bare string.
[[nodiscard]] ConfigValue parse_flag_value(const std::string& text);

enum class RunMode { simulate, sweep, spectrum, feasibility };

[[nodiscard]] RunMode parse_run_mode(std::string_view name);
[[nodiscard]] std::string run_mode_name(RunMode mode);

/// Grid given as an explicit list, or as start:stop:count (inclusive, linear).
struct GridSpec {
  std::vector<double> values;
  std::string text;  // as written, for metadata
};

[[nodiscard]] GridSpec parse_grid(const std::string& text);
[[nodiscard]] std::vector<double> linspace(double start, double stop, std::size_t count);

struct RunConfig {
  PhysicalParams physical = PhysicalParams::dimensionless_reference();
  IntegratorConfig integrator{};
  RunMode mode = RunMode::simulate;
  std::optional<HamiltonianKind> hamiltonian;  // mode default when unset
  std::optional<int> n_tot_max;                 // mode default when unset
  bool hard_core_pair = true;
  bool atomic_decay = true;
  std::optional<GridSpec> grid;  // mode default when unset
  double window = 0.5;
  Units units = Units::kappa;
  double threshold = 50.0;
  double horizon = 4000.0;
  double settle_factor = 10.0;
  Execution execution = Execution::openmp;
  std::filesystem::path out_dir = ".";
  bool beta_given = false;

  [[nodiscard]] HamiltonianKind resolved_hamiltonian() const;
  [[nodiscard]] int resolved_n_tot_max() const;
  [[nodiscard]] Truncation truncation() const;
};

/// Applies one entry. Throws ConfigError naming entry.origin and entry.key.
void apply_entry(RunConfig& cfg, const ConfigEntry& entry);

/// Cross-field checks (physical invariants, integrator, window). Throws ConfigError.
void validate(const RunConfig& cfg);

/// Keys understood by apply_entry, in documentation order.
[[nodiscard]] const std::vector<std::string>& config_keys();

}  // namespace polariton
