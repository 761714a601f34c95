#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lanestab::cli {

/// Exit-code contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUser = 1;
inline constexpr int kExitNumerical = 2;

/// Runs the command line `args` (without the program name). Regular
/// output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace lanestab::cli
