#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bloch::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitInvariant = 3;

// Parses argv, runs one subcommand and writes its files under --out.
// Diagnostics go to err, a one-line summary per file to out.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bloch::cli
