#pragma once

#include <ostream>

namespace volkit {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitNumerical = 3 };

/// Runs the command line. Output files go where --output says ("-" is `out`);
/// every failure is reported as a single line on `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace volkit
