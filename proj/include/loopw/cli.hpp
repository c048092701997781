#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace loopw {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes of the `loopw` tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitRejected = 1,  // type errors, refuted (or, with --strict, unproven) obligations, divergence
  kExitUsage = 2,     // bad arguments, unreadable file, syntax or well-formedness errors
  kExitRuntime = 3,   // escaped label, fuel exhausted
};

/// Runs the command line `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace loopw
