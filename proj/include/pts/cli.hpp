#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pts {

// Exit statuses shared by every subcommand.
enum ExitStatus : int {
  kExitTrue = 0,
  kExitFalse = 1,
  kExitUnknown = 2,
  kExitError = 3,
  kExitSyntax = 4,
  kExitFile = 5,
};

// Runs the command line (arguments without the program name) and returns
// the exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pts
