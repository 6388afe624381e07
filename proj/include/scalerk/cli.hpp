#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace scalerk {

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitConfigError = 2 };

/// Entry point of the scalerk tool; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scalerk
