#include "polariton/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace polariton {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  std::string cleaned;
  for (char c : s) {
    if (c != '_') cleaned.push_back(c);  // TOML digit separators
  }
  if (cleaned == "inf" || cleaned == "+inf") return HUGE_VAL;
  if (cleaned == "-inf") return -HUGE_VAL;
  if (cleaned == "nan") return std::nan("");
  const char* begin = cleaned.data();
  if (*begin == '+') ++begin;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, cleaned.data() + cleaned.size(), v);
  if (ec != std::errc() || ptr != cleaned.data() + cleaned.size()) return std::nullopt;
  return v;
}

/// Removes a trailing comment that is not inside a string.
std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

ConfigValue parse_literal(std::string_view raw, const std::string& where) {
  const std::string_view v = trim(raw);
  if (v.empty()) throw ConfigError(where + ": missing value");
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"') throw ConfigError(where + ": unterminated string");
    std::string out;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
      if (v[i] == '\\' && i + 2 < v.size()) {
        const char next = v[++i];
        out.push_back(next == 'n' ? '\n' : next == 't' ? '\t' : next);
      } else {
        out.push_back(v[i]);
      }
    }
    return out;
  }
  if (v == "true") return true;
  if (v == "false") return false;
  if (v.front() == '[') {
    if (v.back() != ']') throw ConfigError(where + ": unterminated array");
    std::vector<double> values;
    std::string_view body = trim(v.substr(1, v.size() - 2));
    while (!body.empty()) {
      const auto comma = body.find(',');
      const auto item = trim(body.substr(0, comma));
      if (!item.empty()) {
        const auto num = parse_number(item);
        if (!num) throw ConfigError(where + ": array element '" + std::string(item) + "' is not a number");
        values.push_back(*num);
      }
      if (comma == std::string_view::npos) break;
      body = body.substr(comma + 1);
    }
    return values;
  }
  if (const auto num = parse_number(v)) return *num;
  throw ConfigError(where + ": cannot parse value '" + std::string(v) + "'");
}

bool is_bare_key(std::string_view key) {
  return !key.empty() && std::all_of(key.begin(), key.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

}  // namespace

std::vector<ConfigEntry> parse_config(std::string_view text, const std::string& source_name) {
  std::vector<ConfigEntry> entries;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    const std::string_view raw =
        text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    const std::string where = source_name + ":" + std::to_string(line_no);
    const std::string_view line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || !is_bare_key(trim(line.substr(1, line.size() - 2)))) {
        throw ConfigError(where + ": malformed section header");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    if (!is_bare_key(key)) throw ConfigError(where + ": invalid key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError(where + ": duplicate key '" + key + "'");
    entries.push_back({key, parse_literal(line.substr(eq + 1), where + ": key '" + key + "'"), where});
  }
  return entries;
}

std::vector<ConfigEntry> load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

ConfigValue parse_flag_value(const std::string& text) {
  const auto t = trim(text);
  if (t == "true") return true;
  if (t == "false") return false;
  if (!t.empty() && t.front() == '[') return parse_literal(t, "flag value");
  if (const auto num = parse_number(t)) return *num;
  return std::string(t);
}

RunMode parse_run_mode(std::string_view name) {
  if (name == "simulate") return RunMode::simulate;
  if (name == "sweep") return RunMode::sweep;
  if (name == "spectrum") return RunMode::spectrum;
  if (name == "feasibility") return RunMode::feasibility;
  throw ConfigError("unknown mode '" + std::string(name) +
                    "' (expected simulate, sweep, spectrum or feasibility)");
}

std::string run_mode_name(RunMode mode) {
  switch (mode) {
    case RunMode::simulate: return "simulate";
    case RunMode::sweep: return "sweep";
    case RunMode::spectrum: return "spectrum";
    case RunMode::feasibility: return "feasibility";
  }
  return "?";
}

std::vector<double> linspace(double start, double stop, std::size_t count) {
  std::vector<double> out;
  if (count == 0) return out;
  if (count == 1) return {start};
  out.reserve(count);
  const double step = (stop - start) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out.push_back(start + step * static_cast<double>(i));
  out.back() = stop;
  return out;
}

GridSpec parse_grid(const std::string& text) {
  GridSpec spec;
  spec.text = text;
  const auto t = trim(text);
  if (t.empty()) throw ConfigError("empty grid");
  if (t.find(':') != std::string_view::npos) {
    std::vector<std::string_view> parts;
    std::string_view rest = t;
    while (true) {
      const auto colon = rest.find(':');
      parts.push_back(trim(rest.substr(0, colon)));
      if (colon == std::string_view::npos) break;
      rest = rest.substr(colon + 1);
    }
    const auto start = parts.size() == 3 ? parse_number(parts[0]) : std::nullopt;
    const auto stop = parts.size() == 3 ? parse_number(parts[1]) : std::nullopt;
    const auto count = parts.size() == 3 ? parse_number(parts[2]) : std::nullopt;
    if (!start || !stop || !count || *count < 1 || std::floor(*count) != *count) {
      throw ConfigError("grid '" + text + "' is not start:stop:count with integer count >= 1");
    }
    spec.values = linspace(*start, *stop, static_cast<std::size_t>(*count));
    return spec;
  }
  std::string_view rest = t;
  while (true) {
    const auto comma = rest.find(',');
    const auto item = trim(rest.substr(0, comma));
    const auto num = parse_number(item);
    if (!num) throw ConfigError("grid value '" + std::string(item) + "' is not a number");
    spec.values.push_back(*num);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return spec;
}

HamiltonianKind RunConfig::resolved_hamiltonian() const {
  if (mode == RunMode::spectrum) return HamiltonianKind::eit;
  return hamiltonian.value_or(HamiltonianKind::full);
}

int RunConfig::resolved_n_tot_max() const {
  if (n_tot_max) return *n_tot_max;
  return mode == RunMode::spectrum ? 1 : 4;
}

Truncation RunConfig::truncation() const {
  const int n = resolved_n_tot_max();
  return hard_core_pair ? Truncation::hard_core(n) : Truncation::bosonic(n);
}

namespace {

struct Field {
  std::string key;
  std::function<void(RunConfig&, const ConfigValue&, const std::string&)> apply;
};

std::string describe(const ConfigValue& v) {
  if (std::holds_alternative<double>(v)) return "number";
  if (std::holds_alternative<bool>(v)) return "boolean";
  if (std::holds_alternative<std::string>(v)) return "string";
  return "array";
}

double as_number(const ConfigValue& v, const std::string& where) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  throw ConfigError(where + ": expected a number, got a " + describe(v));
}

bool as_bool(const ConfigValue& v, const std::string& where) {
  if (const auto* b = std::get_if<bool>(&v)) return *b;
  throw ConfigError(where + ": expected true or false, got a " + describe(v));
}

std::string as_string(const ConfigValue& v, const std::string& where) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  throw ConfigError(where + ": expected a string, got a " + describe(v));
}

Field number(std::string key, double PhysicalParams::*member) {
  return {key, [member](RunConfig& c, const ConfigValue& v, const std::string& w) {
            c.physical.*member = as_number(v, w);
          }};
}

Field integrator(std::string key, double IntegratorConfig::*member) {
  return {key, [member](RunConfig& c, const ConfigValue& v, const std::string& w) {
            c.integrator.*member = as_number(v, w);
          }};
}

Field scalar(std::string key, double RunConfig::*member) {
  return {key, [member](RunConfig& c, const ConfigValue& v, const std::string& w) {
            c.*member = as_number(v, w);
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      number("n_atoms", &PhysicalParams::n_atoms),
      number("g", &PhysicalParams::g),
      number("kappa", &PhysicalParams::kappa),
      number("gamma_e", &PhysicalParams::gamma_e),
      number("gamma_r", &PhysicalParams::gamma_r),
      number("chi_bar", &PhysicalParams::chi_bar),
      number("cos_theta", &PhysicalParams::cos_theta),
      {"beta",
       [](RunConfig& c, const ConfigValue& v, const std::string& w) {
         c.physical.beta = as_number(v, w);
         c.beta_given = true;
       }},
      number("delta", &PhysicalParams::delta),
      {"control_rabi",
       [](RunConfig& c, const ConfigValue& v, const std::string& w) {
         c.physical.control_rabi = as_number(v, w);
       }},
      {"mode",
       [](RunConfig& c, const ConfigValue& v, const std::string& w) {
         try {
           c.mode = parse_run_mode(as_string(v, w));
         } catch (const ConfigError& e) {
           throw ConfigError(w + ": " + e.what());
         }
       }},
      {"hamiltonian",
       [](RunConfig& c, const ConfigValue& v, const std::string& w) {
         try {
           c.hamiltonian = parse_hamiltonian_kind(as_string(v, w));
         } catch (const std::invalid_argument& e) {
           throw ConfigError(w + ": " + e.what());
         }
       }},
      {"n_tot_max",
       [](RunConfig& c, const ConfigValue& v, const std::string& w) {
         const double n = as_number(v, w);
         if (n < 0 || std::floor(n) != n || n > 64) {
           throw ConfigError(w + ": expected an integer in [0, 64]");
         }
         c.n_tot_max = static_cast<int>(n);
       }},
      {"hard_core_pair",
       [](RunConfig& c, const ConfigValue& v, const std::string& w) {
         c.hard_core_pair = as_bool(v, w);
       }},
      {"atomic_decay",
       [](RunConfig& c, const ConfigValue& v, const std::string& w) {
         c.atomic_decay = as_bool(v, w);
       }},
      {"grid",
       [](RunConfig& c, const ConfigValue& v, const std::string& w) {
         if (const auto* arr = std::get_if<std::vector<double>>(&v)) {
           std::ostringstream text;
           for (std::size_t i = 0; i < arr->size(); ++i) text << (i ? "," : "") << (*arr)[i];
           c.grid = GridSpec{*arr, text.str()};
           return;
         }
         if (const auto* d = std::get_if<double>(&v)) {
           c.grid = GridSpec{{*d}, std::to_string(*d)};
           return;
         }
         try {
           c.grid = parse_grid(as_string(v, w));
         } catch (const ConfigError& e) {
           throw ConfigError(w + ": " + e.what());
         }
       }},
      scalar("window", &RunConfig::window),
      {"units",
       [](RunConfig& c, const ConfigValue& v, const std::string& w) {
         const auto s = as_string(v, w);
         if (s == "kappa") {
           c.units = Units::kappa;
         } else if (s == "two_pi_mhz" || s == "2pi_mhz") {
           c.units = Units::two_pi_mhz;
         } else {
           throw ConfigError(w + ": units must be kappa or two_pi_mhz");
         }
       }},
      scalar("threshold", &RunConfig::threshold),
      scalar("horizon", &RunConfig::horizon),
      scalar("settle_factor", &RunConfig::settle_factor),
      {"execution",
       [](RunConfig& c, const ConfigValue& v, const std::string& w) {
         const auto s = as_string(v, w);
         if (s == "serial") {
           c.execution = Execution::serial;
         } else if (s == "openmp" || s == "parallel") {
           c.execution = Execution::openmp;
         } else {
           throw ConfigError(w + ": execution must be serial or openmp");
         }
       }},
      {"out_dir",
       [](RunConfig& c, const ConfigValue& v, const std::string& w) {
         c.out_dir = as_string(v, w);
       }},
      integrator("t_start", &IntegratorConfig::t_start),
      integrator("t_end", &IntegratorConfig::t_end),
      integrator("stride", &IntegratorConfig::output_stride),
      integrator("rtol", &IntegratorConfig::rtol),
      integrator("atol", &IntegratorConfig::atol),
      integrator("max_step", &IntegratorConfig::max_step),
      {"max_steps",
       [](RunConfig& c, const ConfigValue& v, const std::string& w) {
         const double n = as_number(v, w);
         if (n < 1 || std::floor(n) != n || n > 1e15) {
           throw ConfigError(w + ": expected a positive integer");
         }
         c.integrator.max_steps = static_cast<long long>(n);
       }},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& f : fields()) out.push_back(f.key);
    return out;
  }();
  return keys;
}

void apply_entry(RunConfig& cfg, const ConfigEntry& entry) {
  std::string key = entry.key;
  std::replace(key.begin(), key.end(), '-', '_');
  for (const auto& f : fields()) {
    if (f.key == key) {
      f.apply(cfg, entry.value, entry.origin + ": key '" + key + "'");
      return;
    }
  }
  throw ConfigError(entry.origin + ": unknown key '" + entry.key + "'");
}

void validate(const RunConfig& cfg) {
  try {
    validate(cfg.physical);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid physical parameters: ") + e.what());
  }
  try {
    cfg.integrator.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid integrator settings: ") + e.what());
  }
  if (!(cfg.window > 0.0 && cfg.window <= 1.0)) throw ConfigError("key 'window': must lie in (0, 1]");
  if (!(cfg.threshold > 0.0)) throw ConfigError("key 'threshold': must be > 0");
  if (!(cfg.horizon > 0.0)) throw ConfigError("key 'horizon': must be > 0");
  if (!(cfg.settle_factor > 0.0)) throw ConfigError("key 'settle_factor': must be > 0");
  if (cfg.grid && cfg.grid->values.empty()) throw ConfigError("key 'grid': empty grid");
  if (cfg.mode == RunMode::sweep && cfg.grid) {
    for (double c : cfg.grid->values) {
      if (!(c > 0.0 && c < 1.0)) {
        throw ConfigError("key 'grid': cos_theta values must lie in (0, 1)");
      }
    }
  }
}

}  // namespace polariton
