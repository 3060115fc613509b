#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace shakedrill::app {

/// Exit codes shared by all subcommands.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitBundle = 2,
  kExitOutOfBounds = 3,
};

/// Entry point for the `shakedrill` executable. `args[0]` is the program
/// name. Diagnostics go to `err`; report/CSV output goes to `out` when no
/// --out path is given.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shakedrill::app
