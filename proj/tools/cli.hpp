#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polytrope::cli {

enum ExitCode : int {
  kSuccess = 0,
  kCheckFailure = 1,
  kArgumentError = 2,
  kNumericalFailure = 3,
};

/// Runs the command line `args` (program name excluded). Text output that has
/// no --out destination goes to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polytrope::cli
