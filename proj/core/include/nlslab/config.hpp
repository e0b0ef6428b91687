#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "nlslab/experiments.hpp"

namespace nlslab {

/// Malformed or invalid configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kConfigVersion = 1;

/// Parses a config document. Unknown keys and a missing or different
/// "config_version" are errors. `kind` replaces the document's experiment
/// before validation.
ExperimentConfig parse_config(const std::string& json_text, std::optional<ExperimentKind> kind = std::nullopt);
ExperimentConfig load_config(const std::filesystem::path& path, std::optional<ExperimentKind> kind = std::nullopt);

/// Canonical JSON (sorted keys, every field present).
std::string config_to_json(const ExperimentConfig& config, int indent = 2);

/// FNV-1a 64 of the canonical JSON without output_dir, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

/// {"N", "s", "theta0", "sign"}.
std::string params_to_json(const IMethodParams& params);
IMethodParams params_from_json(const std::string& json_text);

std::string fnv1a_hex(const std::string& bytes);

}  // namespace nlslab
