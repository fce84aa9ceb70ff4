#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace btp {

/// Exit statuses of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitVerificationFailed = 1, kExitUsage = 2 };

/// Runs `btpeval` with `args` (args[0] is the program name). The report goes
/// to `out` unless --out names a file; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace btp
