#pragma once

#include <iosfwd>

namespace fcmcfl::cli {

enum ExitCode : int { success = 0, usage_error = 1, numerical_failure = 2 };

/// Environment variable naming the directory for outputs without --out.
inline constexpr const char* output_dir_env = "FCMCFL_OUTPUT_DIR";

/// Full command line entry. CSV goes to --out, to $FCMCFL_OUTPUT_DIR/<command>.csv,
/// or to `out`; diagnostics and progress go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fcmcfl::cli
