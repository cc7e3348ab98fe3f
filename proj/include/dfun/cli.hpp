#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dfun {

/// Exit statuses of the command-line front end.
enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_validation = 2, exit_law_failure = 3 };

/// Runs one command. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dfun
