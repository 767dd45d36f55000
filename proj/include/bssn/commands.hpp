#pragma once

// Run configuration and report rendering shared by the C API and the CLI.
//
// A run is (command, JSON config). Missing keys take defaults, unknown keys
// are a parse error, and the resolved config is embedded in the report so a
// report fully describes how it was produced.

#include <string>
#include <vector>

namespace bssn {

inline constexpr const char* kVersion = "1.0.0";

struct CommandOutput {
  bool passed = false;
  std::string json; ///< report of record
  std::string csv;  ///< flat projection, header row first
};

/// Commands: verify, family, compare, sweep, truncation, stats.
/// Throws Error::Parse for malformed configs and Error::InvalidArgument for
/// out-of-range values.
CommandOutput run_command(const std::string& command, const std::string& config_json);

/// "lo:hi:count" -> count points, geometric or linear.
std::vector<double> parse_range(const std::string& text, bool geometric);

} // namespace bssn
