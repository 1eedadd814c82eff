#include "omnimod/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <numeric>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "omnimod/config_io.hpp"
#include "omnimod/frames.hpp"
#include "omnimod/plot.hpp"
#include "omnimod/trace_io.hpp"

namespace omnimod
{

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{

json metrics_json(const MapperMetrics& m)
{
  return {{"rank", m.rank},
          {"condition_number", std::isfinite(m.condition_number) ? json(m.condition_number) : json()},
          {"sigma_max", m.sigma_max},
          {"singular_values", m.singular_values}};
}

std::string utc_now()
{
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<double> degrees(const std::vector<double>& radians)
{
  std::vector<double> out;
  for (double a : radians)
    out.push_back(a * 180.0 / std::numbers::pi);
  return out;
}

void check_structure(const ScenarioConfig& config)
{
  if (config.formation.size() < 3)
    throw Error(ErrorKind::formation_size, "a structure needs at least 3 modules, got " +
                                             std::to_string(config.formation.size()));
  const auto report =
    check_formation_feasible(recentre_formation(config.formation), config.docking_spec());
  if (!report.feasible())
  {
    std::string why;
    for (const auto& f : report.failures)
      why += (why.empty() ? "" : "; ") + f;
    throw Error(ErrorKind::infeasible, "formation is not feasible: " + why);
  }
}

std::vector<double> cumulative_energy(const ScenarioTrace& trace, std::vector<double>& times)
{
  std::vector<double> out;
  double sum = 0.0;
  for (const auto& row : trace.rows)
  {
    if (row.stage != Stage::transport)
      continue;
    sum += row.power * trace.dt;
    times.push_back(row.t);
    out.push_back(sum);
  }
  return out;
}

}  // namespace

int exit_code_for(const Error& error)
{
  ErrorKind kind = error.kind();
  if (const auto* se = dynamic_cast<const ScenarioError*>(&error))
  {
    switch (se->cause())
    {
      case ErrorKind::infeasible:
      case ErrorKind::formation_size: return 3;
      case ErrorKind::optimizer: return 4;
      default: return 5;
    }
  }
  switch (kind)
  {
    case ErrorKind::parse:
    case ErrorKind::configuration:
    case ErrorKind::parameter:
    case ErrorKind::empty_trace: return 2;
    case ErrorKind::infeasible:
    case ErrorKind::formation_size: return 3;
    case ErrorKind::optimizer:
    case ErrorKind::degenerate_mapper:
    case ErrorKind::cost_bound: return 4;
    case ErrorKind::scenario: return 5;
  }
  return 5;
}

ScenarioConfig load_scenario(const fs::path& config_path, const RunOverrides& overrides)
{
  ScenarioConfig config = load_config(config_path);
  if (overrides.seed)
  {
    config.rng_seed = *overrides.seed;
    config.optimizer.rng_seed = *overrides.seed;
  }
  if (overrides.dt)
    config.dt = *overrides.dt;
  return config;
}

OptimizationResult cmd_optimize(const fs::path& config_path, const fs::path& out_dir,
                                const RunOverrides& overrides)
{
  const ScenarioConfig config = load_scenario(config_path, overrides);
  config.module.validate();
  config.optimizer.validate();
  check_structure(config);

  const FormationConfiguration formation = recentre_formation(config.formation);
  const OptimizationResult result =
    optimize_headings(formation, config.module.wheel_radius, config.optimizer);

  json doc;
  doc["config_digest"] = config_digest(config);
  doc["headings"] = result.headings.angles;
  doc["headings_deg"] = degrees(result.headings.angles);
  doc["objective"] = result.objective_value;
  doc["metrics"] = metrics_json(result.metrics);
  doc["starts_converged"] = result.starts_converged;
  doc["rng_seed"] = config.rng_seed;
  write_text_file(out_dir / "headings.json", doc.dump(2) + "\n");
  return result;
}

ScenarioMetrics cmd_run(const fs::path& config_path, const fs::path& out_dir,
                        const RunOverrides& overrides)
{
  const std::string started = utc_now();
  const ScenarioConfig config = load_scenario(config_path, overrides);
  config.validate();
  const std::string digest = config_digest(config);
  const ScenarioTrace trace = run_scenario(config);
  const ScenarioMetrics m = summarize(trace, config.settle_time);

  const fs::path trace_path = out_dir / "trace.csv";
  const fs::path metrics_path = out_dir / "metrics.json";
  const fs::path manifest_path = out_dir / "manifest.json";
  write_text_file(trace_path, format_trace_csv(trace, digest));

  json metrics;
  metrics["name"] = config.name;
  metrics["kind"] = to_string(config.kind);
  metrics["config_digest"] = digest;
  metrics["energy"] = m.energy;
  metrics["final_position_error"] = m.final_position_error;
  metrics["final_heading_error"] = m.final_heading_error;
  metrics["rms_position_error"] = m.rms_position_error;
  metrics["steady_max_position_error"] = m.steady_max_position_error;
  metrics["steady_max_heading_error"] = m.steady_max_heading_error;
  if (config.trajectory.path == PathKind::circle)
    metrics["steady_max_radial_error"] = m.steady_max_radial_error;
  metrics["max_wheel_speed"] = m.max_wheel_speed;
  metrics["omega_max"] = trace.omega_max;
  metrics["stage_durations"] = {{"navigate", m.timings.navigate},
                                {"dock", m.timings.dock},
                                {"reorient", m.timings.reorient},
                                {"transport", m.timings.transport}};
  if (!trace.headings.angles.empty())
    metrics["headings"] = trace.headings.angles;
  if (trace.mapper)
    metrics["mapper"] = metrics_json(*trace.mapper);
  metrics["max_tensile_utilization"] = m.max_tensile_utilization;
  metrics["max_shear_utilization"] = m.max_shear_utilization;
  metrics["rows"] = trace.rows.size();
  write_text_file(metrics_path, metrics.dump(2) + "\n");

  json manifest;
  manifest["config_digest"] = digest;
  manifest["tool_version"] = kToolVersion;
  manifest["rng_seed"] = config.rng_seed;
  manifest["started"] = started;
  manifest["finished"] = utc_now();
  manifest["outputs"] = {trace_path.string(), metrics_path.string(), manifest_path.string()};
  write_text_file(manifest_path, manifest.dump(2) + "\n");
  return m;
}

std::vector<ComparisonRow> cmd_compare(const fs::path& config_path, const fs::path& headings_path,
                                       const fs::path& out_dir, const RunOverrides& overrides)
{
  const ScenarioConfig base = load_scenario(config_path, overrides);
  const std::vector<NamedHeadings> entries = load_heading_list(headings_path);
  if (entries.size() < 2)
    throw Error(ErrorKind::configuration, "a comparison needs at least two heading configurations");
  base.validate();
  check_structure(base);
  const FormationConfiguration formation = recentre_formation(base.formation);
  for (const auto& e : entries)
    if (e.headings && e.headings->size() != formation.size())
      throw Error(ErrorKind::configuration, "configuration '" + e.name + "' has " +
                                              std::to_string(e.headings->size()) +
                                              " headings for " + std::to_string(formation.size()) +
                                              " modules");

  std::vector<ComparisonRow> rows;
  std::vector<EnergySeries> series;
  for (std::size_t k = 0; k < entries.size(); ++k)
  {
    ComparisonRow row;
    row.name = entries[k].name;
    ScenarioConfig config = base;
    config.name = base.name + " / " + row.name;
    config.headings = entries[k].headings;
    if (config.headings)
    {
      row.metrics = mapper_metrics(
        build_velocity_mapper(formation, *config.headings, base.module.wheel_radius));
      if (row.metrics.rank < 3)
      {
        row.feasible = false;
        row.headings = *config.headings;
        rows.push_back(row);
        continue;
      }
    }
    ScenarioTrace trace;
    try
    {
      trace = run_scenario(config);
    }
    catch (const ScenarioError& e)
    {
      if (e.cause() != ErrorKind::degenerate_mapper)
        throw;
      row.feasible = false;
      rows.push_back(row);
      continue;
    }
    row.headings = trace.headings;
    if (trace.mapper)
      row.metrics = *trace.mapper;
    row.energy = energy_of_trace(trace);
    write_text_file(out_dir / "runs" / std::to_string(k + 1) / "trace.csv",
                    format_trace_csv(trace, config_digest(config)));
    EnergySeries s;
    s.name = row.name;
    s.cumulative = cumulative_energy(trace, s.t);
    series.push_back(std::move(s));
    rows.push_back(row);
  }

  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < rows.size(); ++k)
    if (rows[k].feasible)
      order.push_back(k);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rows[a].energy < rows[b].energy; });
  for (std::size_t i = 0; i < order.size(); ++i)
    rows[order[i]].rank = static_cast<int>(i + 1);
  for (auto& s : series)
    for (const auto& r : rows)
      if (r.feasible && r.name == s.name)
        s.rank = r.rank;

  std::string table = "rank,name,status,energy,condition_number,sigma_max,objective,headings_deg\n";
  auto emit = [&](const ComparisonRow& r) {
    std::string hd;
    for (double a : degrees(r.headings.angles))
      hd += (hd.empty() ? "" : " ") + format_number(a);
    const bool full = r.metrics.rank == 3;
    table += (r.feasible ? std::to_string(r.rank) : std::string("-")) + "," + r.name + "," +
             (r.feasible ? "ok" : "infeasible") + "," +
             (r.feasible ? format_number(r.energy) : "") + "," +
             (full ? format_number(r.metrics.condition_number) : "") + "," +
             format_number(r.metrics.sigma_max) + "," +
             (full ? format_number(objective_from_metrics(r.metrics)) : "") + "," + hd + "\n";
  };
  for (std::size_t k : order)
    emit(rows[k]);
  for (const auto& r : rows)
    if (!r.feasible)
      emit(r);
  write_text_file(out_dir / "energy_table.csv", table);
  write_text_file(out_dir / "cumulative_energy.svg", render_energy_svg(series));
  return rows;
}

void cmd_plot(const fs::path& trace_path, const fs::path& out_path)
{
  const ScenarioTrace trace = load_trace_csv(trace_path);
  write_text_file(out_path, render_trace_svg(trace));
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Heading optimisation and simulation for modular omni-wheel robots", "omnimod"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  RunOverrides overrides;
  std::uint64_t seed = 0;
  double dt = 0.0;
  std::string config_path;
  std::string headings_path;
  std::string trace_path;
  std::string out_path = "out";

  auto add_overrides = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "override the scenario RNG seed");
    sub->add_option("--dt", dt, "override the simulation step [s]")->check(CLI::PositiveNumber);
    sub->add_option("--out", out_path, "output directory")->capture_default_str();
  };

  auto* optimize = app.add_subcommand("optimize", "optimise the wheel headings of a formation");
  optimize->add_option("config", config_path, "scenario file")->required();
  add_overrides(optimize);

  auto* run = app.add_subcommand("run", "simulate a scenario and write trace, metrics, manifest");
  run->add_option("config", config_path, "scenario file")->required();
  add_overrides(run);

  auto* compare = app.add_subcommand("compare", "rank heading configurations by transport energy");
  compare->add_option("config", config_path, "scenario file")->required();
  compare->add_option("headings", headings_path, "heading configuration list")->required();
  add_overrides(compare);

  auto* plot = app.add_subcommand("plot", "render a trace as SVG");
  plot->add_option("trace", trace_path, "trace CSV")->required();
  plot->add_option("--out", out_path, "output SVG file")->required();

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try
  {
    for (CLI::App* sub : {optimize, run, compare})
    {
      if (sub->count("--seed"))
        overrides.seed = seed;
      if (sub->count("--dt"))
        overrides.dt = dt;
    }

    if (*optimize)
    {
      const auto r = cmd_optimize(config_path, out_path, overrides);
      out << "objective " << format_number(r.objective_value) << ", condition number "
          << format_number(r.metrics.condition_number) << ", sigma_max "
          << format_number(r.metrics.sigma_max) << '\n';
      out << "wrote " << (fs::path(out_path) / "headings.json").string() << '\n';
    }
    else if (*run)
    {
      const auto m = cmd_run(config_path, out_path, overrides);
      out << "energy " << format_number(m.energy) << ", final position error "
          << format_number(m.final_position_error) << " m, final heading error "
          << format_number(m.final_heading_error) << " rad\n";
      out << "wrote " << (fs::path(out_path) / "trace.csv").string() << '\n';
    }
    else if (*compare)
    {
      const auto rows = cmd_compare(config_path, headings_path, out_path, overrides);
      for (const auto& r : rows)
      {
        if (r.feasible)
          out << "rank " << r.rank << "  " << r.name << "  energy " << format_number(r.energy) << '\n';
        else
          out << "infeasible  " << r.name << '\n';
      }
      out << "wrote " << (fs::path(out_path) / "energy_table.csv").string() << '\n';
    }
    else if (*plot)
    {
      cmd_plot(trace_path, out_path);
      out << "wrote " << out_path << '\n';
    }
    return 0;
  }
  catch (const Error& e)
  {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  catch (const std::exception& e)
  {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace omnimod
