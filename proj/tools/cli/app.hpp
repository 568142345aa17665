#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace w9::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kNumerical = 2 };

/// Runs one w9tool invocation; args exclude the program name. Output goes to
/// `out` unless --out is given, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace w9::cli
