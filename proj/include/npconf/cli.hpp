#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace npconf {

/// Exit codes shared by all subcommands.
enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitError = 2 };

/// Entry point of the npconf tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace npconf
