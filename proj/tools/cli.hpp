#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace crofton::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitDegraded = 3;

/// Runs the command line `args` (program name excluded). Results go to `out`,
/// diagnostics to `err`; returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace crofton::cli
