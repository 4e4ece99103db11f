#pragma once

// Command-line front end. Subcommands:
//   tune, levels, eye, constellation, thermal-sweep, ber-sweep, compare,
//   reproduce-paper
// Exit codes: 0 success, 1 validation or usage error, 2 numerical failure,
// 3 reproduce-paper check mismatch. Failures print one JSON error object
// on `err`; successes print one JSON object listing the artifacts on `out`.

#include <iosfwd>

namespace ramzi {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitNumerical = 2, kExitMismatch = 3 };

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ramzi
