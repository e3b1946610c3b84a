#pragma once

#include <iosfwd>

namespace fraclab {

/// Exit codes of run_command.
enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitNonConvergence = 2, kExitViolation = 3 };

/// Command-line entry point:
///
///   fraclab <xi|solve|sweep|limit|audit|selftest> [--config FILE] [--p P]
///           [--deterministic] [--seed N] [--csv FILE] [--summary FILE]
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fraclab
