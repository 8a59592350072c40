#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace abvr {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitAllFailed = 3;

/// Entry point behind the `abvr` executable. `args` excludes the program name.
/// Reports go to `out` unless --output names a file; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace abvr
