#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace mrhydro::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kRuntimeError = 1,  // numeric failure, divergence, unwritable output
  kUsageError = 2,    // bad flags, unreadable or invalid config
};

/// Environment variable naming the default config file.
inline constexpr const char* kConfigEnv = "MRHYDRO_CONFIG";

/// Runs one invocation. `args` excludes the program name. Human summaries go
/// to `out`, diagnostics to `err`; CSV goes to `out` when no output path is
/// given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(const std::string& data);

}  // namespace mrhydro::cli
