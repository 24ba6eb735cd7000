#pragma once

#include <string>
#include <vector>

namespace pelastic::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotConverged = 2;

// Runs the command line (args[0] is the program name). Never throws; errors
// are reported on stderr and mapped to exit codes.
int run(const std::vector<std::string> &args);

}  // namespace pelastic::cli
