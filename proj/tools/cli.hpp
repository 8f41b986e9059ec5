#pragma once

#include <ostream>

namespace torsionlab::cli {

enum ExitCode { kSuccess = 0, kInternalError = 1, kUsageError = 2 };

/// Runs one torsionlab command line. Results go to `out` (or to files named by
/// --out), diagnostics to `err`.
int dispatch(int argc, const char* const argv[], std::ostream& out, std::ostream& err);

}  // namespace torsionlab::cli
