#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rbm::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitInputError = 2,
  kExitCapRefused = 3,
};

/// Runs the command line `args` (without the program name). Documents and
/// summaries go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rbm::cli
