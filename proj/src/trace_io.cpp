#include "omnimod/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "omnimod/config_io.hpp"
#include "omnimod/error.hpp"

namespace omnimod
{

namespace
{

const char* const kFixedColumns[] = {"t",     "stage",     "x",     "y",     "theta", "ref_x",
                                     "ref_y", "ref_theta", "err_x", "err_y", "err_theta",
                                     "power"};

std::string join(const std::vector<double>& xs)
{
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i)
    out += (i ? ", " : "") + format_number(xs[i]);
  return out + "]";
}

std::vector<std::string> split(const std::string& line)
{
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ','))
    out.push_back(cell);
  if (!line.empty() && line.back() == ',')
    out.emplace_back();
  return out;
}

std::size_t module_count(const ScenarioTrace& trace)
{
  std::size_t n = trace.n_modules;
  for (const auto& row : trace.rows)
    n = std::max({n, row.omegas.size(), row.modules.size()});
  return n;
}

}  // namespace

std::string format_trace_csv(const ScenarioTrace& trace, const std::string& config_digest)
{
  const std::size_t n = module_count(trace);
  const auto& tr = trace.trajectory;
  std::ostringstream os;
  os << "# omnimod trace\n";
  os << "# name: " << trace.name << '\n';
  os << "# kind: " << to_string(trace.kind) << '\n';
  os << "# config_digest: " << config_digest << '\n';
  os << "# dt: " << format_number(trace.dt) << '\n';
  os << "# omega_max: " << format_number(trace.omega_max) << '\n';
  os << "# n_modules: " << n << '\n';
  os << "# trajectory: path=" << to_string(tr.path) << " heading_mode=" << to_string(tr.heading_mode)
     << " origin=" << join({tr.origin.x, tr.origin.y}) << " speed=" << format_number(tr.speed)
     << " radius=" << format_number(tr.radius) << " phase=" << format_number(tr.phase)
     << " direction=" << format_number(tr.direction) << " length=" << format_number(tr.length)
     << " width=" << format_number(tr.width) << " corner_radius=" << format_number(tr.corner_radius)
     << " amplitude=" << format_number(tr.amplitude) << " wavelength=" << format_number(tr.wavelength)
     << " heading=" << format_number(tr.heading)
     << " heading_amplitude=" << format_number(tr.heading_amplitude)
     << " heading_frequency=" << format_number(tr.heading_frequency) << '\n';
  os << "# headings: " << join(trace.headings.angles) << '\n';
  os << "# units: t s; x y ref_x ref_y err_x err_y m; theta ref_theta err_theta heading rad; "
        "omega rad/s; power rad^2/s^2; stage 1 navigate, 2 dock, 3 reorient, 4 transport\n";

  for (std::size_t c = 0; c < std::size(kFixedColumns); ++c)
    os << (c ? "," : "") << kFixedColumns[c];
  for (std::size_t i = 1; i <= n; ++i)
    os << ",omega_" << i;
  for (std::size_t i = 1; i <= n; ++i)
    os << ",m" << i << "_x,m" << i << "_y,m" << i << "_heading";
  os << '\n';

  for (const auto& row : trace.rows)
  {
    os << format_number(row.t) << ',' << static_cast<int>(row.stage);
    for (double v : {row.pose.x, row.pose.y, row.pose.theta, row.reference.x, row.reference.y,
                     row.reference.theta, row.error.e_x, row.error.e_y, row.error.e_theta, row.power})
      os << ',' << format_number(v);
    for (std::size_t i = 0; i < n; ++i)
      os << ',' << (i < row.omegas.size() ? format_number(row.omegas[i]) : "");
    for (std::size_t i = 0; i < n; ++i)
    {
      if (i < row.modules.size())
        os << ',' << format_number(row.modules[i].x) << ',' << format_number(row.modules[i].y) << ','
           << format_number(row.modules[i].theta);
      else
        os << ",,,";
    }
    os << '\n';
  }
  return os.str();
}

ScenarioTrace parse_trace_csv(const std::string& text)
{
  ScenarioTrace trace;
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> columns;
  std::size_t row_index = 0;

  while (std::getline(in, line))
  {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    if (line[0] == '#')
    {
      const auto colon = line.find(':');
      if (colon == std::string::npos)
        continue;
      const std::string key = line.substr(2, colon - 2);
      const std::string value = line.substr(std::min(line.size(), colon + 2));
      if (key == "name")
        trace.name = value;
      else if (key == "kind")
        trace.kind = scenario_kind_from_string(value);
      else if (key == "dt" || key == "omega_max")
      {
        double v = 0.0;
        std::from_chars(value.data(), value.data() + value.size(), v);
        (key == "dt" ? trace.dt : trace.omega_max) = v;
      }
      continue;
    }
    if (columns.empty())
    {
      columns = split(line);
      if (columns.size() < std::size(kFixedColumns))
        throw Error(ErrorKind::parse, "trace header has too few columns");
      for (std::size_t c = 0; c < std::size(kFixedColumns); ++c)
        if (columns[c] != kFixedColumns[c])
          throw Error(ErrorKind::parse, "unexpected trace column '" + columns[c] + "', expected '" +
                                          kFixedColumns[c] + "'");
      const std::size_t extra = columns.size() - std::size(kFixedColumns);
      if (extra % 4 != 0)
        throw Error(ErrorKind::parse, "trace has an inconsistent number of module columns");
      trace.n_modules = extra / 4;
      continue;
    }

    ++row_index;
    const auto cells = split(line);
    if (cells.size() != columns.size())
      throw Error(ErrorKind::parse, "trace row " + std::to_string(row_index) + ": expected " +
                                      std::to_string(columns.size()) + " values, got " +
                                      std::to_string(cells.size()));
    std::vector<double> values(cells.size(), std::nan(""));
    for (std::size_t c = 0; c < cells.size(); ++c)
    {
      const std::string& s = cells[c];
      if (s.empty())
        continue;
      const auto res = std::from_chars(s.data(), s.data() + s.size(), values[c]);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw Error(ErrorKind::parse, "trace row " + std::to_string(row_index) + ": column '" +
                                        columns[c] + "' is not a number: '" + s + "'");
      if (!std::isfinite(values[c]))
        throw Error(ErrorKind::parse, "trace row " + std::to_string(row_index) + ": column '" +
                                        columns[c] + "' is not finite");
    }
    for (std::size_t c = 0; c < std::size(kFixedColumns); ++c)
      if (cells[c].empty())
        throw Error(ErrorKind::parse, "trace row " + std::to_string(row_index) + ": column '" +
                                        columns[c] + "' is empty");

    TraceRow row;
    row.t = values[0];
    const int stage = static_cast<int>(values[1]);
    if (stage < 1 || stage > 4 || values[1] != stage)
      throw Error(ErrorKind::parse,
                  "trace row " + std::to_string(row_index) + ": stage must be 1, 2, 3 or 4");
    row.stage = static_cast<Stage>(stage);
    row.pose = {values[2], values[3], values[4]};
    row.reference = {values[5], values[6], values[7]};
    row.error = {values[8], values[9], values[10]};
    row.power = values[11];
    const std::size_t n = trace.n_modules;
    const std::size_t base = std::size(kFixedColumns);
    for (std::size_t i = 0; i < n; ++i)
      if (!cells[base + i].empty())
        row.omegas.push_back(values[base + i]);
    for (std::size_t i = 0; i < n; ++i)
    {
      const std::size_t c = base + n + 3 * i;
      if (!cells[c].empty())
        row.modules.push_back({values[c], values[c + 1], values[c + 2]});
    }
    trace.rows.push_back(std::move(row));
  }

  if (trace.rows.empty())
    throw Error(ErrorKind::empty_trace, "trace has no data rows");
  return trace;
}

ScenarioTrace load_trace_csv(const std::filesystem::path& path)
{
  return parse_trace_csv(read_text_file(path));
}

}  // namespace omnimod
