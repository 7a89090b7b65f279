#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pbqct {

enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitCapacity = 3, kExitNumerical = 4 };

/// Environment variable naming the default directory for sweep output.
inline constexpr const char* kOutputDirEnv = "PBQCT_OUTPUT_DIR";

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience form; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pbqct
