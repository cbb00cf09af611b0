#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nematic::cli {

enum ExitCode : int { kOk = 0, kSolverFailure = 1, kConfigError = 2 };

/// Runs the `nematic` command line (argv[0] is the program name) writing
/// reports to out and diagnostics to err. Returns the process exit code.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace nematic::cli
