#pragma once

#include <iosfwd>

namespace sigmalab::cli {

enum ExitCode : int {
  kPass = 0,
  kCheckFailed = 1,
  kConfigError = 2,
  kNotConverged = 3,
};

/// Parses argv, runs one subcommand, prints the JSON report on `out` and
/// diagnostics on `err`. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sigmalab::cli
