#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qwalk {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInvariant = 3;
inline constexpr int kExitIo = 4;

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "QWALK_OUT_DIR";

/// Runs one subcommand. `args` excludes the program name. Status lines go to `out`,
/// diagnostics to `err`; result files are written under the output directory, or to
/// `out` when --output is "-".
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace qwalk
