#pragma once

#include <string>
#include <vector>

namespace gsana {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitAbort = 3;

// Runs the `gsana` tool on `args` (without the program name) and returns
// its exit code. Never throws.
int run_cli(std::vector<std::string> args);

}  // namespace gsana
