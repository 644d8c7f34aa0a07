#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qflat::cli {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCriterionFailed = 1;
inline constexpr int kExitUsage = 2;

// Parses argv (argv[0] is the program name) and runs one subcommand.
// Results go to `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qflat::cli
