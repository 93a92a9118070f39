#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace freelunch {

// Exit codes shared by the binary and the in-process entry point.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitFreeLunch = 3;

// Full command line minus argv[0]. Testable in-process; the binary is a thin
// wrapper around this.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace freelunch
