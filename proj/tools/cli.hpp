#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tga::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kViolated = 2;
inline constexpr int kTransportFailed = 3;
inline constexpr int kConfigError = 64;
inline constexpr int kSpaceError = 65;

/// Runs the tga command line. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tga::cli
