#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace conslaw {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitUsage = 2, kExitInternal = 3 };

/// Entry point of the `conslaw` tool. `args` excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace conslaw
