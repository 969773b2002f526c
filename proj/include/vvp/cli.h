#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vvp {

// Exit codes of the command-line interface.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitInsufficientData = 3;

// Runs `vvp <verb> [flags]` in-process. args excludes the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace vvp
