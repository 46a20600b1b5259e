#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace occu::cli {

inline constexpr const char* kToolVersion = "occu 0.1.0";

/// Runs one command line (without the program name). Returns the exit code:
/// 0 success, 1 usage error, 2 data error, 3 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace occu::cli
