#pragma once

#include <iosfwd>

namespace dixie::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kGateFailure = 1,
  kUsage = 2,
  kNonConvergence = 3,
};

/// Runs one command line. Reports go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dixie::cli
