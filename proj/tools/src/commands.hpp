#pragma once

#include <iosfwd>

namespace mubest::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,       // bad flags, unreadable or unwritable files
  kExitTarget = 3,      // numerical target not reached or unreachable
  kExitValidation = 4,  // an internal consistency check failed
};

/// Entry point of the `mubest` tool. Diagnostics go to `err`, results to `out`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mubest::cli
