#pragma once

#include <ostream>

namespace ldstat::cli {

enum ExitCode : int { kSuccess = 0, kInputError = 1, kEstimationFailure = 2 };

/// Entry point of the `ldstat` command line tool; argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ldstat::cli
