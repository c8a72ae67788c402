#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trajpred::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 2;
inline constexpr int kExitDefect = 3;

/// Runs one command line (args excludes the program name). `in` backs
/// `--input -` or a missing --input, `out` backs a missing --out. Returns the
/// process exit code: 0 success, 3 defect predicted, 2 any failure.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace trajpred::cli
