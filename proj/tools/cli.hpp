#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rtensor::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitChecksFailed = 2;

/// Entry point behind the randtensor-cli binary. `args` excludes the program name.
/// JSON results go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rtensor::cli
