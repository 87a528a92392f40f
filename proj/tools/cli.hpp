#pragma once

#include <string>
#include <vector>

namespace magobs::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Names accepted as the first positional argument.
const std::vector<std::string>& command_names();

/// Full command-line entry point; returns the process exit status.
int run(int argc, char** argv);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

}  // namespace magobs::cli
