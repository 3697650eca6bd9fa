// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>
#include <span>
#include <string>

namespace ggospa::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one subcommand (dist, simulate, timing, knn, validate). `args`
/// excludes the program name. Returns the process exit code.
int run_command(std::span<const std::string> args, std::ostream& out,
                std::ostream& err);

}  // namespace ggospa::cli
