#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "omnimod/error.hpp"
#include "omnimod/simulator.hpp"

namespace omnimod
{

inline constexpr const char* kToolVersion = "1.0.0";

struct RunOverrides
{
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
};

/// Exit code contract: 0 ok, 2 bad input, 3 infeasible formation or n < 3,
/// 4 optimiser failure, 5 simulation stage failure.
int exit_code_for(const Error& error);

ScenarioConfig load_scenario(const std::filesystem::path& config_path, const RunOverrides& overrides);

/// Writes <out_dir>/headings.json.
OptimizationResult cmd_optimize(const std::filesystem::path& config_path,
                                const std::filesystem::path& out_dir, const RunOverrides& overrides);

/// Writes <out_dir>/trace.csv, metrics.json and manifest.json.
ScenarioMetrics cmd_run(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
                        const RunOverrides& overrides);

struct ComparisonRow
{
  std::string name;
  bool feasible{true};
  int rank{0};  ///< 1 = lowest energy; 0 when infeasible
  double energy{0.0};
  HeadingConfiguration headings;
  MapperMetrics metrics;
};

/// Runs the scenario once per heading configuration. Writes
/// <out_dir>/energy_table.csv, <out_dir>/cumulative_energy.svg and one
/// <out_dir>/runs/<k>/trace.csv per feasible configuration.
std::vector<ComparisonRow> cmd_compare(const std::filesystem::path& config_path,
                                       const std::filesystem::path& headings_path,
                                       const std::filesystem::path& out_dir,
                                       const RunOverrides& overrides);

void cmd_plot(const std::filesystem::path& trace_path, const std::filesystem::path& out_path);

/// Entry point of the command-line tool; returns the process exit code.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace omnimod
