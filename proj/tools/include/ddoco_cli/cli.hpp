#pragma once

#include <iosfwd>

namespace ddoco::cli {

/// Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

/// Subcommands:
///   run --config <path> [--seed <u64>] [--out <dir>] [--mu <int>] [--gamma <float>]
///   validate --config <path>
///   demo-siso [--out <dir>]
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ddoco::cli
