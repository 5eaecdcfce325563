#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vennabers {

inline constexpr const char* kVersion = "0.1.0";

// Runs the `vacal` command line. `args` excludes the program name.
// Returns the process exit code: 0 success, 2 usage error, 3 data error,
// 4 degenerate model.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vennabers
