#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pfno::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitNumerical = 2;

// args excludes the program name. Returns the process exit code.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pfno::cli
