#include "omnimod/config_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include "omnimod/error.hpp"

namespace omnimod
{

namespace
{

[[noreturn]] void fail_at(const YAML::Mark& mark, const std::string& message)
{
  std::ostringstream os;
  if (mark.is_null())
    os << message;
  else
    os << "line " << mark.line + 1 << ", column " << mark.column + 1 << ": " << message;
  throw Error(ErrorKind::parse, os.str());
}

std::string describe(const std::string& path, const std::string& key)
{
  return path.empty() ? key : path + "." + key;
}

/// Strict reader for one YAML mapping: every key must be consumed.
class MapReader
{
public:
  MapReader(const YAML::Node& node, std::string path) : node_(node), path_(std::move(path))
  {
    if (!node_.IsMap())
      fail_at(node_.Mark(), "'" + (path_.empty() ? std::string("document") : path_) +
                              "' must be a mapping");
  }

  bool has(const std::string& key) const { return static_cast<bool>(node_[key]); }

  YAML::Node take(const std::string& key)
  {
    used_.insert(key);
    return node_[key];
  }

  double number(const std::string& key, double fallback)
  {
    const YAML::Node v = take(key);
    return v ? as_number(v, describe(path_, key)) : fallback;
  }

  /// Radians under `key`, or degrees under `key_deg`; not both.
  double angle(const std::string& key, double fallback)
  {
    const std::string deg = key + "_deg";
    if (has(key) && has(deg))
      fail_at(node_[deg].Mark(), "give either '" + key + "' or '" + deg + "', not both");
    if (has(deg))
      return as_number(take(deg), describe(path_, deg)) * std::numbers::pi / 180.0;
    return number(key, fallback);
  }

  int integer(const std::string& key, int fallback)
  {
    const YAML::Node v = take(key);
    if (!v)
      return fallback;
    try
    {
      return v.as<int>();
    }
    catch (const YAML::Exception&)
    {
      fail_at(v.Mark(), "'" + describe(path_, key) + "' must be an integer");
    }
  }

  std::string text(const std::string& key, const std::string& fallback)
  {
    const YAML::Node v = take(key);
    if (!v)
      return fallback;
    if (!v.IsScalar())
      fail_at(v.Mark(), "'" + describe(path_, key) + "' must be a string");
    return v.Scalar();
  }

  const std::string& path() const { return path_; }

  void finish() const
  {
    for (const auto& kv : node_)
    {
      const auto key = kv.first.Scalar();
      if (!used_.count(key))
        fail_at(kv.first.Mark(), "unknown key '" + describe(path_, key) + "'");
    }
  }

  static double as_number(const YAML::Node& v, const std::string& what)
  {
    if (!v.IsScalar())
      fail_at(v.Mark(), "'" + what + "' must be a number");
    try
    {
      return v.as<double>();
    }
    catch (const YAML::Exception&)
    {
      fail_at(v.Mark(), "'" + what + "' must be a number, got '" + v.Scalar() + "'");
    }
  }

private:
  YAML::Node node_;
  std::string path_;
  std::set<std::string> used_;
};

std::vector<double> number_list(const YAML::Node& v, const std::string& what, double scale = 1.0)
{
  if (!v.IsSequence())
    fail_at(v.Mark(), "'" + what + "' must be a list of numbers");
  std::vector<double> out;
  for (const auto& item : v)
    out.push_back(MapReader::as_number(item, what) * scale);
  return out;
}

Vec2 read_vec2(const YAML::Node& v, const std::string& what)
{
  const auto xs = number_list(v, what);
  if (xs.size() != 2)
    fail_at(v.Mark(), "'" + what + "' must be [x, y]");
  return {xs[0], xs[1]};
}

std::optional<HeadingConfiguration> read_headings(MapReader& r, const std::string& key)
{
  const std::string deg = key + "_deg";
  if (r.has(key) && r.has(deg))
    fail_at(r.take(deg).Mark(), "give either '" + key + "' or '" + deg + "', not both");
  if (r.has(deg))
    return HeadingConfiguration{number_list(r.take(deg), describe(r.path(), deg),
                                            std::numbers::pi / 180.0)};
  if (r.has(key))
    return HeadingConfiguration{number_list(r.take(key), describe(r.path(), key))};
  return std::nullopt;
}

Pose2D read_pose(const YAML::Node& v, const std::string& what)
{
  MapReader r(v, what);
  const double x = r.number("x", 0.0);
  const double y = r.number("y", 0.0);
  const double theta = r.angle("theta", 0.0);
  r.finish();
  return {x, y, theta};
}

/// Converts library errors raised while building the config into parse errors at `mark`.
template <typename F>
auto at_node(const YAML::Node& node, F&& f)
{
  try
  {
    return f();
  }
  catch (const Error& e)
  {
    if (e.kind() == ErrorKind::parse)
      throw;
    fail_at(node.Mark(), e.what());
  }
}

ScenarioConfig build_config(const YAML::Node& root)
{
  ScenarioConfig c;
  MapReader top(root, "");
  c.name = top.text("name", c.name);
  if (top.has("kind"))
  {
    const YAML::Node k = top.take("kind");
    c.kind = at_node(k, [&] { return scenario_kind_from_string(k.Scalar()); });
  }
  if (top.has("seed"))
  {
    const YAML::Node s = top.take("seed");
    try
    {
      c.rng_seed = s.as<std::uint64_t>();
    }
    catch (const YAML::Exception&)
    {
      fail_at(s.Mark(), "'seed' must be a non-negative integer");
    }
  }
  c.dt = top.number("dt", c.dt);
  c.duration = top.number("duration", c.duration);
  c.command_delay = top.number("command_delay", c.command_delay);
  c.settle_time = top.number("settle_time", c.settle_time);

  if (top.has("module"))
  {
    MapReader m(top.take("module"), "module");
    c.module.contour_circumradius = m.number("contour_circumradius", c.module.contour_circumradius);
    c.module.wheel_radius = m.number("wheel_radius", c.module.wheel_radius);
    c.module.max_wheel_speed = m.number("max_wheel_speed", c.module.max_wheel_speed);
    c.module.mass = m.number("mass", c.module.mass);
    c.module.n_faces = m.integer("n_faces", c.module.n_faces);
    c.module.max_steering_rate = m.angle("max_steering_rate", c.module.max_steering_rate);
    m.finish();
  }

  if (top.has("docking"))
  {
    MapReader d(top.take("docking"), "docking");
    c.magnet_tensile_force = d.number("tensile_force", c.magnet_tensile_force);
    c.align_range = d.number("align_range", c.align_range);
    c.magnet_inset = d.number("magnet_inset", c.magnet_inset);
    d.finish();
  }

  if (top.has("formation"))
  {
    MapReader f(top.take("formation"), "formation");
    if (f.has("positions"))
    {
      const YAML::Node ps = f.take("positions");
      if (!ps.IsSequence())
        fail_at(ps.Mark(), "'formation.positions' must be a list of [x, y]");
      for (const auto& p : ps)
        c.formation.positions.push_back(read_vec2(p, "formation.positions[]"));
    }
    if (f.has("edges"))
    {
      const YAML::Node es = f.take("edges");
      if (!es.IsSequence())
        fail_at(es.Mark(), "'formation.edges' must be a list of [a, face_a, b, face_b]");
      for (const auto& e : es)
      {
        const auto xs = number_list(e, "formation.edges[]");
        if (xs.size() != 4)
          fail_at(e.Mark(), "docking edge must be [a, face_a, b, face_b]");
        for (double x : xs)
          if (x < 0.0 || x != std::floor(x))
            fail_at(e.Mark(), "docking edge entries must be non-negative integers");
        c.formation.docking_edges.push_back({static_cast<std::size_t>(xs[0]),
                                             static_cast<int>(xs[1]),
                                             static_cast<std::size_t>(xs[2]),
                                             static_cast<int>(xs[3])});
      }
    }
    f.finish();
  }

  c.headings = read_headings(top, "headings");

  if (top.has("optimizer"))
  {
    MapReader o(top.take("optimizer"), "optimizer");
    c.optimizer.n_starts = o.integer("n_starts", c.optimizer.n_starts);
    c.optimizer.max_iterations = o.integer("max_iterations", c.optimizer.max_iterations);
    c.optimizer.objective_tolerance = o.number("objective_tolerance", c.optimizer.objective_tolerance);
    c.optimizer.angle_tolerance = o.angle("angle_tolerance", c.optimizer.angle_tolerance);
    o.finish();
  }
  c.optimizer.rng_seed = c.rng_seed;

  if (top.has("trajectory"))
  {
    const YAML::Node node = top.take("trajectory");
    MapReader t(node, "trajectory");
    auto& tr = c.trajectory;
    if (t.has("path"))
    {
      const YAML::Node v = t.take("path");
      tr.path = at_node(v, [&] { return path_kind_from_string(v.Scalar()); });
    }
    if (t.has("heading_mode"))
    {
      const YAML::Node v = t.take("heading_mode");
      tr.heading_mode = at_node(v, [&] { return heading_mode_from_string(v.Scalar()); });
    }
    if (t.has("origin"))
      tr.origin = read_vec2(t.take("origin"), "trajectory.origin");
    tr.speed = t.number("speed", tr.speed);
    tr.radius = t.number("radius", tr.radius);
    tr.phase = t.angle("phase", tr.phase);
    tr.direction = t.angle("direction", tr.direction);
    tr.length = t.number("length", tr.length);
    tr.width = t.number("width", tr.width);
    tr.corner_radius = t.number("corner_radius", tr.corner_radius);
    tr.amplitude = t.number("amplitude", tr.amplitude);
    tr.wavelength = t.number("wavelength", tr.wavelength);
    tr.heading = t.angle("heading", tr.heading);
    tr.heading_amplitude = t.angle("heading_amplitude", tr.heading_amplitude);
    tr.heading_frequency = t.angle("heading_frequency", tr.heading_frequency);
    t.finish();
  }

  if (top.has("module_gains"))
  {
    MapReader g(top.take("module_gains"), "module_gains");
    c.module_gains.k_s1 = g.number("k_s1", c.module_gains.k_s1);
    c.module_gains.k_s2 = g.number("k_s2", c.module_gains.k_s2);
    c.module_gains.k_s3 = g.number("k_s3", c.module_gains.k_s3);
    g.finish();
  }

  if (top.has("structure_gains"))
  {
    MapReader g(top.take("structure_gains"), "structure_gains");
    auto& s = c.structure_gains;
    s.k_x1 = g.number("k_x1", s.k_x1);
    s.k_x2 = g.number("k_x2", s.k_x2);
    s.k_y1 = g.number("k_y1", s.k_y1);
    s.k_y2 = g.number("k_y2", s.k_y2);
    s.k_theta1 = g.number("k_theta1", s.k_theta1);
    s.k_theta2 = g.number("k_theta2", s.k_theta2);
    s.integral_limit = g.number("integral_limit", s.integral_limit);
    g.finish();
  }

  if (top.has("payload"))
  {
    MapReader p(top.take("payload"), "payload");
    PayloadSpec payload;
    payload.mass = p.number("mass", payload.mass);
    payload.friction_coefficient = p.number("friction_coefficient", payload.friction_coefficient);
    payload.drag_per_kg = p.number("drag_per_kg", payload.drag_per_kg);
    p.finish();
    c.payload = payload;
  }

  if (top.has("initial_offset"))
    c.initial_offset = read_pose(top.take("initial_offset"), "initial_offset");

  if (top.has("module_starts"))
  {
    const YAML::Node starts = top.take("module_starts");
    if (!starts.IsSequence())
      fail_at(starts.Mark(), "'module_starts' must be a list of {x, y, theta}");
    for (const auto& s : starts)
      c.module_starts.push_back(read_pose(s, "module_starts[]"));
  }

  if (top.has("navigation"))
  {
    MapReader nv(top.take("navigation"), "navigation");
    auto& n = c.navigation;
    n.speed = nv.number("speed", n.speed);
    n.dock_speed = nv.number("dock_speed", n.dock_speed);
    n.standoff = nv.number("standoff", n.standoff);
    n.arrive_tolerance = nv.number("arrive_tolerance", n.arrive_tolerance);
    n.stagger = nv.number("stagger", n.stagger);
    n.start_radius = nv.number("start_radius", n.start_radius);
    n.stage_timeout = nv.number("stage_timeout", n.stage_timeout);
    nv.finish();
  }

  top.finish();
  return c;
}

YAML::Node load_yaml(const std::string& text)
{
  try
  {
    YAML::Node root = YAML::Load(text);
    if (!root || root.IsNull())
      throw Error(ErrorKind::parse, "line 1, column 1: document is empty");
    return root;
  }
  catch (const YAML::Exception& e)
  {
    fail_at(e.mark, e.msg);
  }
}

class Emitter
{
public:
  void key(int indent, const std::string& k) { os_ << std::string(indent, ' ') << k << ':'; }

  void value(int indent, const std::string& k, const std::string& v)
  {
    key(indent, k);
    os_ << ' ' << v << '\n';
  }

  void number(int indent, const std::string& k, double v) { value(indent, k, format_number(v)); }

  void list(int indent, const std::string& k, const std::vector<double>& xs)
  {
    value(indent, k, flow(xs));
  }

  void open(int indent, const std::string& k)
  {
    key(indent, k);
    os_ << '\n';
  }

  void raw(const std::string& s) { os_ << s; }

  static std::string flow(const std::vector<double>& xs)
  {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i)
      out += (i ? ", " : "") + format_number(xs[i]);
    return out + "]";
  }

  std::string str() const { return os_.str(); }

private:
  std::ostringstream os_;
};

std::string quote(const std::string& s)
{
  std::string out = "\"";
  for (char ch : s)
  {
    if (ch == '"' || ch == '\\')
      out += '\\';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string format_number(double value)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  std::string out(buf, res.ptr);
  if (out == "inf")
    return ".inf";
  if (out == "-inf")
    return "-.inf";
  if (out == "nan" || out == "-nan")
    return ".nan";
  return out;
}

ScenarioConfig parse_config(const std::string& text)
{
  const YAML::Node root = load_yaml(text);
  return build_config(root);
}

ScenarioConfig load_config(const std::filesystem::path& path)
{
  return parse_config(read_text_file(path));
}

std::string canonical_config(const ScenarioConfig& c)
{
  Emitter e;
  e.value(0, "name", quote(c.name));
  e.value(0, "kind", to_string(c.kind));
  e.value(0, "seed", std::to_string(c.rng_seed));
  e.number(0, "dt", c.dt);
  e.number(0, "duration", c.duration);
  e.number(0, "command_delay", c.command_delay);
  e.number(0, "settle_time", c.settle_time);

  e.open(0, "module");
  e.number(2, "contour_circumradius", c.module.contour_circumradius);
  e.number(2, "wheel_radius", c.module.wheel_radius);
  e.number(2, "max_wheel_speed", c.module.max_wheel_speed);
  e.number(2, "mass", c.module.mass);
  e.value(2, "n_faces", std::to_string(c.module.n_faces));
  e.number(2, "max_steering_rate", c.module.max_steering_rate);

  e.open(0, "docking");
  e.number(2, "tensile_force", c.magnet_tensile_force);
  e.number(2, "align_range", c.align_range);
  e.number(2, "magnet_inset", c.magnet_inset);

  e.open(0, "formation");
  if (c.formation.positions.empty())
    e.raw("  positions: []\n");
  else
    e.open(2, "positions");
  for (const auto& p : c.formation.positions)
    e.raw("    - " + Emitter::flow({p.x, p.y}) + "\n");
  if (!c.formation.docking_edges.empty())
  {
    e.open(2, "edges");
    for (const auto& d : c.formation.docking_edges)
      e.raw("    - [" + std::to_string(d.module_a) + ", " + std::to_string(d.face_a) + ", " +
            std::to_string(d.module_b) + ", " + std::to_string(d.face_b) + "]\n");
  }

  if (c.headings)
    e.list(0, "headings", c.headings->angles);

  e.open(0, "optimizer");
  e.value(2, "n_starts", std::to_string(c.optimizer.n_starts));
  e.value(2, "max_iterations", std::to_string(c.optimizer.max_iterations));
  e.number(2, "objective_tolerance", c.optimizer.objective_tolerance);
  e.number(2, "angle_tolerance", c.optimizer.angle_tolerance);

  const auto& t = c.trajectory;
  e.open(0, "trajectory");
  e.value(2, "path", to_string(t.path));
  e.value(2, "heading_mode", to_string(t.heading_mode));
  e.list(2, "origin", {t.origin.x, t.origin.y});
  e.number(2, "speed", t.speed);
  e.number(2, "radius", t.radius);
  e.number(2, "phase", t.phase);
  e.number(2, "direction", t.direction);
  e.number(2, "length", t.length);
  e.number(2, "width", t.width);
  e.number(2, "corner_radius", t.corner_radius);
  e.number(2, "amplitude", t.amplitude);
  e.number(2, "wavelength", t.wavelength);
  e.number(2, "heading", t.heading);
  e.number(2, "heading_amplitude", t.heading_amplitude);
  e.number(2, "heading_frequency", t.heading_frequency);

  e.open(0, "module_gains");
  e.number(2, "k_s1", c.module_gains.k_s1);
  e.number(2, "k_s2", c.module_gains.k_s2);
  e.number(2, "k_s3", c.module_gains.k_s3);

  const auto& s = c.structure_gains;
  e.open(0, "structure_gains");
  e.number(2, "k_x1", s.k_x1);
  e.number(2, "k_x2", s.k_x2);
  e.number(2, "k_y1", s.k_y1);
  e.number(2, "k_y2", s.k_y2);
  e.number(2, "k_theta1", s.k_theta1);
  e.number(2, "k_theta2", s.k_theta2);
  e.number(2, "integral_limit", s.integral_limit);

  if (c.payload)
  {
    e.open(0, "payload");
    e.number(2, "mass", c.payload->mass);
    e.number(2, "friction_coefficient", c.payload->friction_coefficient);
    e.number(2, "drag_per_kg", c.payload->drag_per_kg);
  }

  e.open(0, "initial_offset");
  e.number(2, "x", c.initial_offset.x);
  e.number(2, "y", c.initial_offset.y);
  e.number(2, "theta", c.initial_offset.theta);

  if (!c.module_starts.empty())
  {
    e.open(0, "module_starts");
    for (const auto& p : c.module_starts)
      e.raw("  - {x: " + format_number(p.x) + ", y: " + format_number(p.y) +
            ", theta: " + format_number(p.theta) + "}\n");
  }

  const auto& n = c.navigation;
  e.open(0, "navigation");
  e.number(2, "speed", n.speed);
  e.number(2, "dock_speed", n.dock_speed);
  e.number(2, "standoff", n.standoff);
  e.number(2, "arrive_tolerance", n.arrive_tolerance);
  e.number(2, "stagger", n.stagger);
  e.number(2, "start_radius", n.start_radius);
  e.number(2, "stage_timeout", n.stage_timeout);
  return e.str();
}

std::string config_digest(const ScenarioConfig& config)
{
  const std::string text = canonical_config(config);
  unsigned char hash[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), hash, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorKind::configuration, "sha256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i)
  {
    out += hex[hash[i] >> 4];
    out += hex[hash[i] & 0xf];
  }
  return out;
}

std::vector<NamedHeadings> parse_heading_list(const std::string& text)
{
  const YAML::Node root = load_yaml(text);
  MapReader top(root, "");
  if (!top.has("configurations"))
    fail_at(root.Mark(), "missing 'configurations' list");
  const YAML::Node list = top.take("configurations");
  top.finish();
  if (!list.IsSequence())
    fail_at(list.Mark(), "'configurations' must be a list");

  std::vector<NamedHeadings> out;
  for (const auto& item : list)
  {
    MapReader r(item, "configurations[]");
    NamedHeadings entry;
    entry.name = r.text("name", "config " + std::to_string(out.size() + 1));
    const std::string optimize = r.text("optimize", "false");
    entry.headings = read_headings(r, "headings");
    r.finish();
    if (optimize == "true" && entry.headings)
      fail_at(item.Mark(), "an entry is either 'optimize: true' or has headings, not both");
    if (optimize != "true" && !entry.headings)
      fail_at(item.Mark(), "entry '" + entry.name + "' needs headings, headings_deg or optimize: true");
    out.push_back(std::move(entry));
  }
  return out;
}

std::vector<NamedHeadings> load_heading_list(const std::filesystem::path& path)
{
  return parse_heading_list(read_text_file(path));
}

std::string read_text_file(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorKind::parse, "cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text)
{
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorKind::configuration, "cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace omnimod
