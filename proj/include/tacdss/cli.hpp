#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tacdss::cli {

/// Exit codes: 0 success, 1 runtime or I/O failure, 2 usage or validation.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs the `tacdss` command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tacdss::cli
