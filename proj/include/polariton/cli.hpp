#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polariton::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericalError = 3;

/// Runs one invocation of the command-line tool. args excludes the program
/// name. Tables and summaries go to out, diagnostics to err.
///
/// Exit codes: 0 success, 2 configuration error (with file:line and key),
/// 3 numerical failure (with the time it occurred), 1 anything else.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

[[nodiscard]] std::string version();

}  // namespace polariton::cli
