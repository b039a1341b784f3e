#pragma once

#include <string>
#include <vector>

namespace lstft::cli {

enum ExitCode { kOk = 0, kInequalityFailure = 1, kInputError = 2, kNonConvergence = 3 };

/// Runs the command line; args excludes the program name.
int run(const std::vector<std::string>& args);

}  // namespace lstft::cli
