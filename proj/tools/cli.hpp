#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace blocksim::cli {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kManifestSchema = 1;

enum ExitCode : int { kOk = 0, kValidationFailure = 1, kUsageError = 2 };

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Lower-case hex SHA-256 of `bytes`.
std::string sha256_hex(const std::string& bytes);

}  // namespace blocksim::cli
