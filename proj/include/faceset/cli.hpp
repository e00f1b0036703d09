// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace faceset::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitNumericFailure = 3;

// Reads FACESET_LOG (error | info | debug) and routes diagnostics to stderr.
void configure_logging();

/// Runs one invocation; `args` excludes the program name. Reports go to
/// `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace faceset::cli
