#include "omnimod/trajectory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "omnimod/error.hpp"

namespace omnimod
{

namespace
{

/// Position, velocity and tangent heading (angle + rate) of a point on the path.
struct PathPoint
{
  Vec2 position;
  Vec2 velocity;
  double tangent{0.0};
  double tangent_rate{0.0};
};

Vec2 rotate(const Vec2& v, double angle)
{
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

PathPoint circle_point(const TrajectoryParams& p, double t)
{
  const double w = p.speed / p.radius;
  const double a = p.phase + w * t;
  PathPoint out;
  out.position = {p.origin.x + p.radius * std::cos(a), p.origin.y + p.radius * std::sin(a)};
  out.velocity = {-p.radius * w * std::sin(a), p.radius * w * std::cos(a)};
  out.tangent = a + std::numbers::pi / 2.0;
  out.tangent_rate = w;
  return out;
}

PathPoint line_point(const TrajectoryParams& p, double t)
{
  const double s = std::min(p.speed * t, p.length);
  const bool moving = p.speed * t < p.length;
  const Vec2 d{std::cos(p.direction), std::sin(p.direction)};
  PathPoint out;
  out.position = {p.origin.x + s * d.x, p.origin.y + s * d.y};
  out.velocity = moving ? Vec2{p.speed * d.x, p.speed * d.y} : Vec2{};
  out.tangent = p.direction;
  return out;
}

PathPoint s_curve_point(const TrajectoryParams& p, double t)
{
  const bool moving = p.speed * t < p.length;
  const double s = std::min(p.speed * t, p.length);
  const double k = kTwoPi / p.wavelength;
  const double s_dot = moving ? p.speed : 0.0;
  const double slope = p.amplitude * k * std::cos(k * s);

  PathPoint out;
  const Vec2 local{s, p.amplitude * std::sin(k * s)};
  const Vec2 world = rotate(local, p.direction);
  out.position = {p.origin.x + world.x, p.origin.y + world.y};
  out.velocity = rotate({s_dot, slope * s_dot}, p.direction);
  out.tangent = p.direction + std::atan(slope);
  const double slope_rate = -p.amplitude * k * k * std::sin(k * s) * s_dot;
  out.tangent_rate = slope_rate / (1.0 + slope * slope);
  return out;
}

PathPoint rounded_rectangle_point(const TrajectoryParams& p, double t)
{
  const double rc = p.corner_radius;
  const double straight_x = p.length - 2.0 * rc;
  const double straight_y = p.width - 2.0 * rc;
  const double arc = std::numbers::pi / 2.0 * rc;
  const double perimeter = 2.0 * (straight_x + straight_y) + 4.0 * arc;
  double s = std::fmod(p.speed * t, perimeter);
  if (s < 0.0)
    s += perimeter;

  const double hx = p.length / 2.0;
  const double hy = p.width / 2.0;
  // Counter-clockwise, starting at the left end of the bottom edge heading +x.
  // Each side is a straight run followed by a quarter arc turning left.
  const std::array<Vec2, 4> starts{Vec2{-hx + rc, -hy}, Vec2{hx, -hy + rc}, Vec2{hx - rc, hy},
                                   Vec2{-hx, hy - rc}};
  const std::array<Vec2, 4> centres{Vec2{hx - rc, -hy + rc}, Vec2{hx - rc, hy - rc},
                                    Vec2{-hx + rc, hy - rc}, Vec2{-hx + rc, -hy + rc}};
  const std::array<double, 4> runs{straight_x, straight_y, straight_x, straight_y};

  PathPoint out;
  for (int side = 0; side < 4; ++side)
  {
    const double heading = side * std::numbers::pi / 2.0;
    const Vec2 dir{std::cos(heading), std::sin(heading)};
    const auto i = static_cast<std::size_t>(side);
    if (s <= runs[i])
    {
      out.position = {starts[i].x + s * dir.x, starts[i].y + s * dir.y};
      out.velocity = {p.speed * dir.x, p.speed * dir.y};
      out.tangent = heading;
      out.tangent_rate = 0.0;
      break;
    }
    s -= runs[i];
    if (s <= arc || side == 3)
    {
      const double a = heading - std::numbers::pi / 2.0 + std::min(s, arc) / rc;
      out.position = {centres[i].x + rc * std::cos(a), centres[i].y + rc * std::sin(a)};
      out.velocity = {-p.speed * std::sin(a), p.speed * std::cos(a)};
      out.tangent = a + std::numbers::pi / 2.0;
      out.tangent_rate = p.speed / rc;
      break;
    }
    s -= arc;
  }
  out.position = {out.position.x + p.origin.x, out.position.y + p.origin.y};
  return out;
}

}  // namespace

void TrajectoryParams::validate() const
{
  if (!(speed >= 0.0) || !std::isfinite(speed))
    throw Error(ErrorKind::configuration, "trajectory speed must be finite and non-negative");
  switch (path)
  {
    case PathKind::circle:
      if (!(radius > 0.0))
        throw Error(ErrorKind::configuration, "circle radius must be positive");
      break;
    case PathKind::line:
      if (!(length >= 0.0))
        throw Error(ErrorKind::configuration, "line length must be non-negative");
      break;
    case PathKind::rounded_rectangle:
      if (!(corner_radius > 0.0) || !(length >= 2.0 * corner_radius) ||
          !(width >= 2.0 * corner_radius))
        throw Error(ErrorKind::configuration,
                    "rounded rectangle needs length, width >= 2 * corner_radius > 0");
      break;
    case PathKind::s_curve:
      if (!(wavelength > 0.0) || !(length >= 0.0))
        throw Error(ErrorKind::configuration, "s-curve needs a positive wavelength");
      break;
  }
}

double trajectory_end_time(const TrajectoryParams& params)
{
  if ((params.path == PathKind::line || params.path == PathKind::s_curve) && params.speed > 0.0)
    return params.length / params.speed;
  if (params.speed == 0.0)
    return 0.0;
  return std::numeric_limits<double>::infinity();
}

ReferenceSample reference_trajectory(const TrajectoryParams& params, double t)
{
  PathPoint point;
  switch (params.path)
  {
    case PathKind::circle: point = circle_point(params, t); break;
    case PathKind::line: point = line_point(params, t); break;
    case PathKind::rounded_rectangle: point = rounded_rectangle_point(params, t); break;
    case PathKind::s_curve: point = s_curve_point(params, t); break;
  }

  double heading = point.tangent;
  double heading_rate = point.tangent_rate;
  switch (params.heading_mode)
  {
    case HeadingMode::tangent: break;
    case HeadingMode::constant:
      heading = params.heading;
      heading_rate = 0.0;
      break;
    case HeadingMode::oscillate:
      heading = params.heading + params.heading_amplitude * std::sin(params.heading_frequency * t);
      heading_rate = params.heading_amplitude * params.heading_frequency *
                     std::cos(params.heading_frequency * t);
      break;
  }

  return {Pose2D{point.position.x, point.position.y, heading},
          StructureTwist{point.velocity.x, point.velocity.y, heading_rate}};
}

const char* to_string(PathKind kind)
{
  switch (kind)
  {
    case PathKind::circle: return "circle";
    case PathKind::line: return "line";
    case PathKind::rounded_rectangle: return "rounded_rectangle";
    case PathKind::s_curve: return "s_curve";
  }
  return "circle";
}

const char* to_string(HeadingMode mode)
{
  switch (mode)
  {
    case HeadingMode::tangent: return "tangent";
    case HeadingMode::constant: return "constant";
    case HeadingMode::oscillate: return "oscillate";
  }
  return "tangent";
}

PathKind path_kind_from_string(const std::string& name)
{
  for (auto k : {PathKind::circle, PathKind::line, PathKind::rounded_rectangle, PathKind::s_curve})
    if (name == to_string(k))
      return k;
  throw Error(ErrorKind::configuration, "unknown trajectory path '" + name + "'");
}

HeadingMode heading_mode_from_string(const std::string& name)
{
  for (auto m : {HeadingMode::tangent, HeadingMode::constant, HeadingMode::oscillate})
    if (name == to_string(m))
      return m;
  throw Error(ErrorKind::configuration, "unknown heading mode '" + name + "'");
}

}  // namespace omnimod
