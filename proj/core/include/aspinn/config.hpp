#pragma once

// Flat `key = value` configuration files. Keys are the long CLI flag names
// without the leading dashes; '#' starts a comment.

#include "aspinn/harness.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace aspinn {

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

/// Throws IoError when unreadable, ConfigError on malformed lines.
ConfigEntries read_config_file(const std::filesystem::path& path);
ConfigEntries parse_config_text(const std::string& text);

/// Applies one setting. Throws ConfigError on unknown keys or bad values.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);
void apply_settings(ExperimentConfig& cfg, const ConfigEntries& entries);

std::vector<MethodKind> parse_method_list(const std::string& text);

}  // namespace aspinn
