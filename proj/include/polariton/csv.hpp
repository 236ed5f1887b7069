#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "polariton/model.hpp"
#include "polariton/observables.hpp"

namespace polariton {

/// Shortest round-trip decimal, capped at 12 significant digits.
/// Non-finite values print as nan, inf and -inf.
[[nodiscard]] std::string format_number(double value);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  [[nodiscard]] std::size_t column_index(const std::string& name) const;  // throws if absent
  [[nodiscard]] std::vector<double> column(const std::string& name) const;
};

/// One `#`-prefixed header line, then comma-separated numeric rows.
void write_csv(std::ostream& os, const CsvTable& table);

/// Inverse of write_csv. Throws std::runtime_error with the line number on
/// malformed input or a row whose width differs from the header.
[[nodiscard]] CsvTable read_csv(std::istream& is);

inline const std::vector<std::string> kSweepColumns{"cos_theta", "g2",        "n0_mean", "n1_max",
                                                    "n2_max",    "truncation", "window"};
inline const std::vector<std::string> kSpectrumColumns{"delta", "photon_number"};
inline const std::vector<std::string> kTrajectoryColumns{"t", "norm", "n0", "n1",
                                                         "n2", "np",   "photon"};
inline const std::vector<std::string> kFeasibilityColumns{"quantity", "value"};

[[nodiscard]] CsvTable sweep_table(const SweepResult& result);
[[nodiscard]] CsvTable spectrum_table(const SweepResult& result);
/// norm is the squared norm of the unnormalized no-jump state.
[[nodiscard]] CsvTable trajectory_table(const PopulationSeries& series);

/// Feasibility rows are keyed by name, so this file is written as text
/// (quantity,value) rather than through CsvTable.
void write_feasibility_csv(std::ostream& os, const FeasibilityReport& report);

}  // namespace polariton
