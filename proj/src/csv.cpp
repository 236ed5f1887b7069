#include "polariton/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace polariton {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";  // folds -0 as well
  char buf[64];
  auto shortest = std::to_chars(buf, buf + sizeof buf, value);
  std::string s(buf, shortest.ptr);
  // Count significant digits of the round-trip form.
  int digits = 0;
  bool leading = true;
  for (char c : s) {
    if (c == 'e' || c == 'E') break;
    if (c < '0' || c > '9') continue;
    if (leading && c == '0') continue;
    leading = false;
    ++digits;
  }
  if (digits <= 12) return s;
  auto capped = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
  return std::string(buf, capped.ptr);
}

std::size_t CsvTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw std::out_of_range("missing CSV column '" + name + "'");
}

std::vector<double> CsvTable::column(const std::string& name) const {
  const std::size_t j = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[j]);
  return out;
}

void write_csv(std::ostream& os, const CsvTable& table) {
  os << '#';
  for (std::size_t j = 0; j < table.columns.size(); ++j) {
    if (j) os << ',';
    os << table.columns[j];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) {
      throw std::logic_error("CSV row width differs from the header");
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) os << ',';
      os << format_number(row[j]);
    }
    os << '\n';
  }
}

namespace {

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_cell(const std::string& cell, std::size_t line_no) {
  const std::string t = trim(cell);
  if (t == "nan") return std::nan("");
  if (t == "inf") return HUGE_VAL;
  if (t == "-inf") return -HUGE_VAL;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw std::runtime_error("CSV line " + std::to_string(line_no) + ": bad number '" + t + "'");
  }
  return v;
}

}  // namespace

CsvTable read_csv(std::istream& is) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (!have_header) {
      if (line.front() != '#') {
        throw std::runtime_error("CSV line " + std::to_string(line_no) + ": expected '#' header");
      }
      for (const auto& c : split_commas(line.substr(1))) table.columns.push_back(trim(c));
      have_header = true;
      continue;
    }
    const auto cells = split_commas(line);
    if (cells.size() != table.columns.size()) {
      throw std::runtime_error("CSV line " + std::to_string(line_no) + ": expected " +
                               std::to_string(table.columns.size()) + " fields, found " +
                               std::to_string(cells.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_cell(c, line_no));
    table.rows.push_back(std::move(row));
  }
  if (!have_header) throw std::runtime_error("CSV has no header line");
  return table;
}

CsvTable sweep_table(const SweepResult& result) {
  CsvTable t{kSweepColumns, {}};
  for (const auto& p : result.points) {
    t.rows.push_back({p.grid_value, p.g2, p.n0_mean, p.n1_max, p.n2_max,
                      static_cast<double>(p.truncation), p.window});
  }
  return t;
}

CsvTable spectrum_table(const SweepResult& result) {
  CsvTable t{kSpectrumColumns, {}};
  for (const auto& p : result.points) t.rows.push_back({p.grid_value, p.photon_number});
  return t;
}

CsvTable trajectory_table(const PopulationSeries& s) {
  CsvTable t{kTrajectoryColumns, {}};
  t.rows.reserve(s.times.size());
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    t.rows.push_back({s.times[i], s.norm_sq[i], s.n0[i], s.n1[i], s.n2[i], s.np[i], s.photon[i]});
  }
  return t;
}

void write_feasibility_csv(std::ostream& os, const FeasibilityReport& report) {
  os << '#' << kFeasibilityColumns[0] << ',' << kFeasibilityColumns[1] << '\n';
  for (const auto& row : report.rows) os << row.key << ',' << format_number(row.value) << '\n';
  os << "threshold," << format_number(report.threshold) << '\n';
  os << "nonlinearity_beats_cavity," << (report.nonlinearity_beats_cavity ? 1 : 0) << '\n';
  os << "nonlinearity_beats_rydberg," << (report.nonlinearity_beats_rydberg ? 1 : 0) << '\n';
  os << "rwa_holds," << (report.rwa_holds ? 1 : 0) << '\n';
}

}  // namespace polariton
