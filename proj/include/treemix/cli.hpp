#pragma once

#include <iosfwd>

namespace treemix::cli {

enum ExitCode : int {
  kOk = 0,
  kValidationError = 1,
  kBoundViolation = 2,
  kCapacityError = 3,
};

/// Entry point of the `treemix` tool. Subcommands: count-pairs,
/// bernstein-bound, concentration-bound, mc-tail, verify-davydov,
/// embedding-check, simulate. Results go to `out` (or --out PATH),
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace treemix::cli
