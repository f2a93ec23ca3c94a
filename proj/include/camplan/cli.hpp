#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace camplan::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kInfeasible = 2,
  kPerformanceViolation = 3,
};

/// Runs the command line `args` (args[0] is the program name). Structured
/// documents go to --out when given, otherwise to `out`; human-readable
/// summaries go to `out` when --out is given, otherwise to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace camplan::cli
