#pragma once

#include <filesystem>
#include <string>

#include "omnimod/simulator.hpp"

namespace omnimod
{

/// CSV with a `#` header block (digest, timing, trajectory, headings, units) and
/// one row per step. Columns: t, stage, x, y, theta, ref_x, ref_y, ref_theta,
/// err_x, err_y, err_theta, power, omega_1..omega_n, then m<i>_x, m<i>_y, m<i>_heading.
std::string format_trace_csv(const ScenarioTrace& trace, const std::string& config_digest);

/// Reads back what format_trace_csv wrote. Throws ErrorKind::empty_trace for a
/// trace without rows and ErrorKind::parse (naming the data row) for malformed
/// or non-finite values.
ScenarioTrace parse_trace_csv(const std::string& text);
ScenarioTrace load_trace_csv(const std::filesystem::path& path);

}  // namespace omnimod
