#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "switchquad/simulation.hpp"

namespace switchquad::io {

inline constexpr int kSchemaVersion = 1;

/// Parses a scenario document. Throws ConfigError naming the offending field path, or
/// AdtViolation when a generated switching pattern cannot satisfy its declared ADT.
sim::Scenario parse_scenario(std::string_view text);

/// Reads and parses a scenario file.
sim::Scenario load_scenario(const std::filesystem::path& path);

/// Serializes a scenario; the switching signal is written as an explicit schedule so that
/// parse_scenario(dump_scenario(s)) reproduces s exactly.
std::string dump_scenario(const sim::Scenario& scenario);

/// Replaces the horizon, dropping switches at or after the new end time.
sim::Scenario with_horizon(sim::Scenario scenario, double horizon);

}  // namespace switchquad::io
