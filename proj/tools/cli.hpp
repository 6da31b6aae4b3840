#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sidkit::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kNumeric = 3,
  kIo = 4,
};

/// Runs the command line in-process. Human-readable output goes to `out`,
/// diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace sidkit::cli
