#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace slrgdp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitNumerical = 4;

// Runs the tool with argv-style arguments (args[0] is the program name).
// Errors are reported on `err` as a one-line JSON object.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view content);
std::string sha256_file(const std::string& path);

}  // namespace slrgdp::cli
