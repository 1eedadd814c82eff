#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "omnimod/simulator.hpp"

namespace omnimod
{

/// Parses a scenario file (YAML). Angles are radians; any angle key may instead
/// be given in degrees with a `_deg` suffix. Unknown keys are rejected.
/// Errors are ErrorKind::parse with a "line L, column C" location.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Fixed key order, radians only, shortest round-trip number formatting.
/// parse_config(canonical_config(c)) == c.
std::string canonical_config(const ScenarioConfig& config);

/// Hex SHA-256 of canonical_config(config).
std::string config_digest(const ScenarioConfig& config);

/// One entry of a heading-comparison list.
struct NamedHeadings
{
  std::string name;
  std::optional<HeadingConfiguration> headings;  ///< empty means "run the optimiser"
};

/// Parses `configurations: [{name, headings | headings_deg | optimize: true}, ...]`.
std::vector<NamedHeadings> parse_heading_list(const std::string& text);
std::vector<NamedHeadings> load_heading_list(const std::filesystem::path& path);

/// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace omnimod
