#pragma once

// Entry point of the jcmss command-line tool, callable in-process.

#include <ostream>
#include <string>
#include <vector>

namespace jcmss::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kUsage = 2,
  kDomain = 3,
  kAccuracy = 4,
  kIo = 5,
};

/// `args` excludes the program name. Normal output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jcmss::cli
