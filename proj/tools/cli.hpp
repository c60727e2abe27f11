#pragma once

#include <ostream>

namespace qdot {

/// Exit codes of the qdot tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitConfig = 2,
    kExitSolver = 3,
    kExitIntegrator = 4,
};

/// Entry point of `qdot <spectrum|drive|sweep|oracle-check> [--config PATH] [flags...]`.
/// Data paths and summary lines go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qdot
