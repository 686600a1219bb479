#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace phasebound::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Entry point of the `phasebound` tool. `args` excludes the program name.
/// Subcommands: fig1, fig2, fig3, bound, oracle.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// CSV number format: 12 significant digits, '.' decimal point.
std::string format_number(double value);

}  // namespace phasebound::cli
