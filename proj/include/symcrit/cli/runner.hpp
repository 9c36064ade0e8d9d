#pragma once

#include <ostream>

namespace symcrit::cli {

enum ExitCode : int {
  kConsistent = 0,
  kViolated = 2,
  kInconclusive = 3,
  kSpecError = 64,
  kNumericError = 65,
};

/// Entry point of the symcrit command line tool. Subcommands: check, fit,
/// estimate-symbol, stationary-density, simulate.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace symcrit::cli
