#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "epsim/experiments.hpp"

namespace epsim {

struct ConfigError {
  std::size_t line = 0;  // 1-based; 0 when the problem has no line (missing key)
  std::string key;       // "section.key", or empty for syntax errors
  std::string message;

  std::string describe() const;
};

struct ConfigParseResult {
  std::optional<ExperimentConfig> config;
  std::vector<ConfigError> errors;

  bool ok() const { return errors.empty(); }
};

/// Parse the sectioned `key = value` grammar. Every problem found is
/// reported; `config` is set only when there are none.
ConfigParseResult parse_config(std::string_view text);

/// Canonical text: every key in fixed order, doubles in shortest round-trip
/// form. parse_config(print_config(c)).config == c.
std::string print_config(const ExperimentConfig& cfg);

/// FNV-1a 64-bit hash of print_config(cfg) as 16 lowercase hex digits.
std::string config_hash(const ExperimentConfig& cfg);

struct ConfigException : std::runtime_error {
  explicit ConfigException(std::vector<ConfigError> errs);
  std::vector<ConfigError> errors;
};

/// Read and parse a file; throws ConfigException on unreadable files or
/// invalid content.
ExperimentConfig load_config(const std::string& path);

}  // namespace epsim
