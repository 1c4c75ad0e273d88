#pragma once

// Subcommands of the schurfact tool: norm, factorize, verify, witness, selftest.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "schurfact/error.hpp"

namespace schurfact::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitParse = 2,
  kExitSolver = 3,
  kExitFlags = 4,
  kExitPrecondition = 5,
  kExitVerification = 6,
};

int exit_code_for(ErrorCode code);

/// FNV-1a 64-bit hash of the input bytes as 16 lowercase hex digits.
std::string input_digest(std::string_view bytes);

inline constexpr int kReportSchema = 1;

/// Full command line, including the program name in argv[0]. Reports go to
/// `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace schurfact::cli
