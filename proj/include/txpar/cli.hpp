#pragma once

#include <string>
#include <vector>

namespace txpar::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_input = 2,     // unreadable or invalid input data
    exit_internal = 3,  // a scheduler broke a schedule invariant
};

/// Entry point of the `txpar` tool: subcommands simulate, generate,
/// oracle-check and validate. `args[0]` is the program name.
int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

}  // namespace txpar::cli
