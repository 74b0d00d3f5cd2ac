#pragma once

#include <iosfwd>

namespace stopctl::cli {

/// Exit codes: 0 success with every check passing, 1 a PO or soundness check
/// failed, 2 usage or configuration error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Entry point for the `stopctl` tool. Subcommands: solve, simulate, bound,
/// check, sweep. Output goes to `out` unless --output names a file.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stopctl::cli
