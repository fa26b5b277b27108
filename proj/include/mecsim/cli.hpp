#pragma once

#include <iosfwd>

namespace mecsim {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitParse = 2,
  kExitValidation = 3,
  kExitRuntime = 4,
};

/// Subcommands generate, run, compare and validate. Diagnostics go to `err`
/// as a single `error[<class>]: <message>` line.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mecsim
