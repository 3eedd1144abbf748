#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bellviol {

// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitParse = 2,
  kExitValidation = 3,
  kExitIncompatible = 4,
  kExitIo = 5,
  kExitAudit = 6,
};

// Runs one invocation. `args` excludes the program name. Reports go to
// `out`; errors go to `err` as a single line "error:<category>: message".
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bellviol
