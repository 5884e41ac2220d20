#pragma once

#include <iosfwd>

namespace optalloc::cli {

// Exit codes are part of the public contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitNotConverged = 2;
inline constexpr int kExitCertificationFailed = 3;

/// Entry point behind the optalloc binary. Subcommands: solve, verify, bench,
/// apportion.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace optalloc::cli
