#pragma once

#include <iosfwd>

namespace multispec::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kParseError = 2,
  kMathError = 3,
  kAuditViolation = 4,
  kResourceError = 5,
};

/// Runs the command line in-process. JSON results go to `out`, diagnostics
/// to `err`.
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace multispec::cli
