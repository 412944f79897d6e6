#pragma once

#include <ostream>

namespace chemostat::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int { kOk = 0, kRuntimeFailure = 1, kUsage = 2, kNumerical = 3 };

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace chemostat::cli
