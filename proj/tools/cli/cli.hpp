#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vesprod {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;       // bad flags, unreadable input, invalid parameters
inline constexpr int kExitEstimation = 2;  // a group failed or a check missed its tolerance

/// Runs `vesprod <command> [flags]`. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vesprod
