#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "obs/engine.hpp"
#include "obs/scenario.hpp"

namespace obs {

// "250us", "1.5ms", "2s". Must resolve to whole microseconds.
std::optional<SimTime> parse_duration(std::string_view text);
// "1500B", "64KB", "1MB" (decimal multiples).
std::optional<Bytes> parse_size(std::string_view text);

// Parses and validates a YAML scenario. Throws ScenarioError carrying every
// problem found: syntax errors with line and column, semantic errors with the
// field path.
ScenarioConfig parse_scenario(std::string_view text);

// Canonical YAML; parse_scenario(serialize_scenario(c)) == c.
std::string serialize_scenario(const ScenarioConfig& cfg);

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::filesystem::path& path);
ScenarioConfig load_scenario(const std::filesystem::path& path);

}  // namespace obs
