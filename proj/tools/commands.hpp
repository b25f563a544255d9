#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace evtforge::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kDomainError = 1, kUsageError = 2 };

/// Runs the command line `args` (without the program name). Normal output
/// goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace evtforge::cli
