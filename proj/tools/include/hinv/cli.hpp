#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hinv::cli {

enum ExitCode : int {
  kSuccess = 0,
  kVerdictFailure = 1,
  kUsageError = 2,
  kNumericFailure = 3,
};

/// Runs one `hinv` invocation. `args` excludes the program name.
/// Subcommands: transform, check-invariance, simulate-sde, simulate-spde,
/// compare, report.
int run_subcommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hinv::cli
