#pragma once

#include <ostream>

namespace abuse {

enum ExitCode : int {
  kExitOk = 0,
  kExitData = 1,
  kExitConfig = 2,
  kExitDivergence = 3,
};

/// Runs one `abuse` command line. Normal output goes to `out`, log lines and
/// diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace abuse
