#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "wnoise/experiments.hpp"

namespace wnoise {

/// Parses flat `key = value` text. Lists use `[a, b, c]`; `#` starts a comment.
/// Unset keys keep their defaults; unknown keys and constraint violations throw
/// ConfigError with the line number and key.
SweepConfig parse_config_text(std::string_view text);

/// Reads a config file. A `.json` path is read as a run manifest and its echoed
/// config is parsed instead.
SweepConfig parse_config(const std::filesystem::path& path);

/// Every key with its value, one per line, in a fixed order. Re-parsing the text
/// gives back an identical config.
std::string to_config_text(const SweepConfig& cfg);

}  // namespace wnoise
