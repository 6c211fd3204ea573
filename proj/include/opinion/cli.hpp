#pragma once

#include <ostream>

namespace opinion {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitPartialFailure = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `opinion-simplify` tool. Subcommands: ingest,
/// summarize, score, analyze, simulate, report. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace opinion
