#pragma once

#include <iosfwd>

namespace aging::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSolverFailure = 1;
inline constexpr int kExitValidation = 2;

/// Parses argv, runs the requested subcommand and writes its artifact.
/// Diagnostics and jump reports go to `err`; stdout artifacts to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace aging::cli
