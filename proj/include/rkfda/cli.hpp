#pragma once

#include <iosfwd>

namespace rkfda {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitParse = 3;
inline constexpr int kExitNumeric = 4;

/// Runs one rkfda subcommand. On failure the last line written to `err` is
/// "error: <usage|parse|numeric>".
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rkfda
