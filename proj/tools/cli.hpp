#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace spinpcd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitSignProblem = 3;

inline constexpr const char* kVersion = "0.1.0";

/// Runs one CLI invocation. `args` excludes the program name. Tables go to
/// `--out` files, or to `out` when no file is given; messages go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spinpcd::cli
