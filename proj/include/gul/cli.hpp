#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gul::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kInvalidArguments = 2, kNumericalFailure = 3 };

/// Runs one command line (without the program name).  Regular output goes to
/// `out`; failures print a single `error kind=... reason="..."` line to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gul::cli
