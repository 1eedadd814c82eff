#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "omnimod/commands.hpp"
#include "omnimod/config_io.hpp"
#include "omnimod/error.hpp"
#include "omnimod/plot.hpp"
#include "omnimod/trace_io.hpp"

using namespace omnimod;
namespace fs = std::filesystem;

namespace
{

fs::path config_path(const std::string& name)
{
  return fs::path(OMNIMOD_CONFIG_DIR) / name;
}

fs::path scratch_dir(const std::string& name)
{
  const fs::path dir = fs::temp_directory_path() / ("omnimod_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ErrorKind parse_error_kind(const std::string& text)
{
  try
  {
    parse_config(text);
  }
  catch (const Error& e)
  {
    return e.kind();
  }
  return ErrorKind::scenario;
}

struct Cli
{
  int code{0};
  std::string out;
  std::string err;
};

Cli cli(std::vector<std::string> args)
{
  args.insert(args.begin(), "omnimod");
  std::vector<const char*> argv;
  for (const auto& a : args)
    argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  Cli r;
  r.code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::size_t count(const std::string& text, const std::string& needle)
{
  std::size_t n = 0;
  for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1))
    ++n;
  return n;
}

ScenarioTrace short_trace()
{
  auto c = load_config(config_path("case1_single_circle.yaml"));
  c.duration = 1.0;
  return run_scenario(c);
}

}  // namespace

TEST(ConfigIo, CanonicalRoundTrip)
{
  for (const char* name : {"case1_single_circle.yaml", "case2_rectangle_structure.yaml",
                           "case3_hexagon_transport.yaml", "case4_payload_1_2kg.yaml",
                           "energy_transport.yaml"})
  {
    const auto c = load_config(config_path(name));
    const auto text = canonical_config(c);
    EXPECT_EQ(parse_config(text), c) << name;
    EXPECT_EQ(canonical_config(parse_config(text)), text) << name;
  }
}

TEST(ConfigIo, DegreeKeysMatchRadians)
{
  const auto a = parse_config("kind: single_track\ntrajectory:\n  heading_deg: 90\n  phase_deg: 180\n");
  const auto b = parse_config("kind: single_track\ntrajectory:\n  heading: 1.5707963267948966\n"
                              "  phase: 3.141592653589793\n");
  EXPECT_NEAR(a.trajectory.heading, b.trajectory.heading, 1e-15);
  EXPECT_NEAR(a.trajectory.phase, b.trajectory.phase, 1e-15);
}

TEST(ConfigIo, UnknownKeyNamesLocation)
{
  try
  {
    parse_config("kind: transport\ntrajectory:\n  speed: 0.03\n  sped: 0.1\n");
    FAIL();
  }
  catch (const Error& e)
  {
    EXPECT_EQ(e.kind(), ErrorKind::parse);
    const std::string what = e.what();
    EXPECT_NE(what.find("line 4"), std::string::npos) << what;
    EXPECT_NE(what.find("sped"), std::string::npos) << what;
  }
}

TEST(ConfigIo, MalformedInputsAreParseErrors)
{
  EXPECT_EQ(parse_error_kind("dt: [1, 2\n"), ErrorKind::parse);
  EXPECT_EQ(parse_error_kind("dt: fast\n"), ErrorKind::parse);
  EXPECT_EQ(parse_error_kind("kind: teleport\n"), ErrorKind::parse);
  EXPECT_EQ(parse_error_kind("- 1\n- 2\n"), ErrorKind::parse);
}

TEST(ConfigIo, DigestIsStable)
{
  const auto c = load_config(config_path("case3_hexagon_transport.yaml"));
  const auto d = config_digest(c);
  EXPECT_EQ(d.size(), 64u);
  EXPECT_EQ(d, config_digest(parse_config(canonical_config(c))));
  auto changed = c;
  changed.rng_seed += 1;
  EXPECT_NE(d, config_digest(changed));
}

TEST(ConfigIo, FormatNumberRoundTrips)
{
  for (double v : {0.0, 0.1, 1.0 / 3.0, -2.5e-17, 1e300, 0.099144})
    EXPECT_EQ(std::stod(format_number(v)), v);
}

TEST(ConfigIo, HeadingList)
{
  const auto list = load_heading_list(config_path("energy_headings.yaml"));
  ASSERT_EQ(list.size(), 4u);
  EXPECT_FALSE(list[0].headings.has_value());
  ASSERT_TRUE(list[1].headings.has_value());
  EXPECT_NEAR(list[1].headings->angles[1], std::numbers::pi / 2, 1e-15);
  EXPECT_EQ(list[2].name, "config-3-fan");
  EXPECT_THROW(parse_heading_list("configurations:\n  - name: x\n"), Error);
}

TEST(TraceIo, CsvRoundTrip)
{
  const auto trace = short_trace();
  const auto text = format_trace_csv(trace, "abc");
  const auto back = parse_trace_csv(text);
  ASSERT_EQ(back.rows.size(), trace.rows.size());
  EXPECT_EQ(back.dt, trace.dt);
  for (std::size_t j = 0; j < trace.rows.size(); ++j)
  {
    EXPECT_EQ(back.rows[j].t, trace.rows[j].t);
    EXPECT_EQ(back.rows[j].pose, trace.rows[j].pose);
    EXPECT_EQ(back.rows[j].reference, trace.rows[j].reference);
    EXPECT_EQ(back.rows[j].omegas, trace.rows[j].omegas);
    EXPECT_EQ(back.rows[j].stage, trace.rows[j].stage);
  }
  EXPECT_EQ(format_trace_csv(back, "abc"), text);
}

TEST(TraceIo, RejectsNonFiniteAndEmpty)
{
  const auto text = format_trace_csv(short_trace(), "abc");
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    lines.push_back(line);
  std::size_t first_data = 0;
  while (lines[first_data].starts_with("#"))
    ++first_data;
  ++first_data;  // column header
  auto& victim = lines[first_data + 3];
  const auto comma = victim.find(',', victim.find(',') + 1);
  victim = victim.substr(0, comma + 1) + "nan" + victim.substr(victim.find(',', comma + 1));
  std::string broken;
  for (const auto& l : lines)
    broken += l + "\n";
  try
  {
    parse_trace_csv(broken);
    FAIL();
  }
  catch (const Error& e)
  {
    EXPECT_EQ(e.kind(), ErrorKind::parse);
    EXPECT_NE(std::string(e.what()).find("row 4"), std::string::npos) << e.what();
  }

  std::string header_only;
  for (std::size_t i = 0; i < first_data; ++i)
    header_only += lines[i] + "\n";
  try
  {
    parse_trace_csv(header_only);
    FAIL();
  }
  catch (const Error& e)
  {
    EXPECT_EQ(e.kind(), ErrorKind::empty_trace);
  }
}

TEST(Plot, TraceSvgHasTwoPaths)
{
  const auto svg = render_trace_svg(short_trace());
  EXPECT_TRUE(svg.starts_with("<svg") || svg.starts_with("<?xml"));
  EXPECT_EQ(count(svg, "<path"), 2u);
  EXPECT_EQ(count(svg, "<polyline"), 3u);
}

TEST(Plot, EnergySvgMarksRankOne)
{
  const auto svg = render_energy_svg({{"a", {0, 1}, {0, 2}, 2}, {"b", {0, 1}, {0, 1}, 1}});
  EXPECT_NE(svg.find("rank 1"), std::string::npos);
}

TEST(Cli, ExitCodeMapping)
{
  EXPECT_EQ(exit_code_for(Error(ErrorKind::parse, "")), 2);
  EXPECT_EQ(exit_code_for(Error(ErrorKind::infeasible, "")), 3);
  EXPECT_EQ(exit_code_for(Error(ErrorKind::formation_size, "")), 3);
  EXPECT_EQ(exit_code_for(Error(ErrorKind::optimizer, "")), 4);
  EXPECT_EQ(exit_code_for(ScenarioError(2, ErrorKind::infeasible, "")), 3);
  EXPECT_EQ(exit_code_for(ScenarioError(3, ErrorKind::degenerate_mapper, "")), 5);
}

TEST(Cli, RunWritesArtifacts)
{
  const auto dir = scratch_dir("run");
  const auto r = cli({"run", config_path("case1_single_circle.yaml").string(), "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "trace.csv"));
  EXPECT_TRUE(fs::exists(dir / "metrics.json"));
  const auto manifest = read_text_file(dir / "manifest.json");
  EXPECT_NE(manifest.find(config_digest(load_config(config_path("case1_single_circle.yaml")))),
            std::string::npos);

  const auto again = scratch_dir("run_again");
  ASSERT_EQ(cli({"run", config_path("case1_single_circle.yaml").string(), "--out", again.string()}).code, 0);
  EXPECT_EQ(read_text_file(dir / "trace.csv"), read_text_file(again / "trace.csv"));

  const auto svg = dir / "trace.svg";
  ASSERT_EQ(cli({"plot", (dir / "trace.csv").string(), "--out", svg.string()}).code, 0);
  EXPECT_EQ(count(read_text_file(svg), "<path"), 2u);
}

TEST(Cli, BadInputsExitTwo)
{
  const auto dir = scratch_dir("bad");
  write_text_file(dir / "broken.yaml", "kind: transport\ndt: [0.01\n");
  EXPECT_EQ(cli({"run", (dir / "broken.yaml").string(), "--out", dir.string()}).code, 2);
  EXPECT_EQ(cli({"run", (dir / "missing.yaml").string(), "--out", dir.string()}).code, 2);
  EXPECT_EQ(cli({"frobnicate"}).code, 2);

  auto c = load_config(config_path("case1_single_circle.yaml"));
  c.duration = 0.0;
  write_text_file(dir / "zero.yaml", canonical_config(c));
  EXPECT_EQ(cli({"run", (dir / "zero.yaml").string(), "--out", dir.string()}).code, 2);

  write_text_file(dir / "empty.csv", "# omnimod trace\n");
  EXPECT_EQ(cli({"plot", (dir / "empty.csv").string(), "--out", (dir / "x.svg").string()}).code, 2);
}

TEST(Cli, FormationErrorsExitThree)
{
  const auto dir = scratch_dir("formation");
  auto c = load_config(config_path("case3_hexagon_transport.yaml"));
  c.formation.positions.resize(2);
  write_text_file(dir / "two.yaml", canonical_config(c));
  EXPECT_EQ(cli({"optimize", (dir / "two.yaml").string(), "--out", dir.string()}).code, 3);

  c = load_config(config_path("case3_hexagon_transport.yaml"));
  c.formation.positions[0] = {0.5, 0.5};
  write_text_file(dir / "apart.yaml", canonical_config(c));
  EXPECT_EQ(cli({"optimize", (dir / "apart.yaml").string(), "--out", dir.string()}).code, 3);
  EXPECT_EQ(cli({"run", (dir / "apart.yaml").string(), "--out", dir.string()}).code, 3);
}

TEST(Cli, StageFailureExitsFive)
{
  const auto dir = scratch_dir("stage");
  auto c = load_config(config_path("case2_rectangle_structure.yaml"));
  c.headings = HeadingConfiguration{std::vector<double>(6, 0.5)};
  write_text_file(dir / "flat.yaml", canonical_config(c));
  const auto r = cli({"run", (dir / "flat.yaml").string(), "--out", dir.string()});
  EXPECT_EQ(r.code, 5);
  EXPECT_NE(r.err.find("stage 3"), std::string::npos) << r.err;
}

TEST(Cli, OptimizeWritesHeadings)
{
  const auto dir = scratch_dir("optimize");
  const auto r = cli({"optimize", config_path("energy_transport.yaml").string(), "--out", dir.string(),
                      "--seed", "11"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto json = read_text_file(dir / "headings.json");
  EXPECT_NE(json.find("\"rng_seed\": 11"), std::string::npos) << json;
  EXPECT_NE(json.find("headings_deg"), std::string::npos);
}

TEST(Compare, RanksFeasibleRowsAndFlagsRankDeficientOnes)
{
  const auto dir = scratch_dir("compare");
  write_text_file(dir / "list.yaml", "configurations:\n"
                                     "  - name: a\n    headings_deg: [0, 90, 0, 0, 90, 0]\n"
                                     "  - name: b\n    headings_deg: [0, 90, 0, 0, 90, 0]\n"
                                     "  - name: flat\n    headings_deg: [10, 10, 10, 10, 10, 10]\n"
                                     "  - name: c\n    headings_deg: [30, 330, 30, 330, 30, 330]\n");
  auto c = load_config(config_path("energy_transport.yaml"));
  c.duration = 20.0;
  write_text_file(dir / "cfg.yaml", canonical_config(c));
  const auto rows = cmd_compare(dir / "cfg.yaml", dir / "list.yaml", dir / "out", {});
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].energy, rows[1].energy);
  EXPECT_FALSE(rows[2].feasible);
  EXPECT_EQ(rows[2].rank, 0);
  EXPECT_TRUE(rows[3].feasible);
  std::vector<int> ranks{rows[0].rank, rows[1].rank, rows[3].rank};
  std::sort(ranks.begin(), ranks.end());
  EXPECT_GE(ranks.front(), 1);
  EXPECT_LE(ranks.back(), 3);
  EXPECT_TRUE(fs::exists(dir / "out" / "energy_table.csv"));
  EXPECT_TRUE(fs::exists(dir / "out" / "cumulative_energy.svg"));
}
