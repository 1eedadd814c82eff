#include <cmath>
#include <string>

#include "omnimod/error.hpp"
#include "omnimod/frames.hpp"
#include "omnimod/types.hpp"

namespace omnimod
{

const char* to_string(ErrorKind kind)
{
  switch (kind)
  {
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::formation_size: return "formation-size";
    case ErrorKind::degenerate_mapper: return "degenerate-mapper";
    case ErrorKind::infeasible: return "infeasible-formation";
    case ErrorKind::optimizer: return "optimizer";
    case ErrorKind::cost_bound: return "cost-bound";
    case ErrorKind::scenario: return "scenario";
    case ErrorKind::parse: return "parse";
    case ErrorKind::empty_trace: return "empty-trace";
  }
  return "unknown";
}

double wrap_to_2pi(double angle)
{
  double wrapped = std::fmod(angle, kTwoPi);
  if (wrapped < 0.0)
    wrapped += kTwoPi;
  // fmod of a tiny negative number plus 2pi can round up to exactly 2pi
  if (wrapped >= kTwoPi)
    wrapped = 0.0;
  return wrapped;
}

double wrap_to_pi(double angle)
{
  double wrapped = wrap_to_2pi(angle);
  if (wrapped > std::numbers::pi)
    wrapped -= kTwoPi;
  return wrapped;
}

void ModuleSpec::validate() const
{
  if (!(contour_circumradius > 0.0) || !(wheel_radius > 0.0) || !(max_wheel_speed > 0.0) ||
      !(mass > 0.0) || !(max_steering_rate > 0.0))
    throw Error(ErrorKind::parameter, "module spec: physical quantities must be strictly positive");
  if (n_faces < 4 || n_faces % 2 != 0)
    throw Error(ErrorKind::parameter,
                "module spec: n_faces must be even and at least 4, got " + std::to_string(n_faces));
}

Vec2 world_from_structure(const Pose2D& structure_pose, const Vec2& local_point)
{
  const double c = std::cos(structure_pose.theta);
  const double s = std::sin(structure_pose.theta);
  return {structure_pose.x + c * local_point.x - s * local_point.y,
          structure_pose.y + s * local_point.x + c * local_point.y};
}

StructureTwist body_from_world(const StructureTwist& world, double theta)
{
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c * world.vx + s * world.vy, -s * world.vx + c * world.vy, world.omega};
}

StructureTwist world_from_body(const StructureTwist& body, double theta)
{
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c * body.vx - s * body.vy, s * body.vx + c * body.vy, body.omega};
}

FormationConfiguration recentre_formation(std::span<const Vec2> positions)
{
  if (positions.size() < 3)
    throw Error(ErrorKind::formation_size,
                "a structure needs at least 3 modules, got " + std::to_string(positions.size()));

  double cx = 0.0;
  double cy = 0.0;
  for (const auto& p : positions)
  {
    cx += p.x;
    cy += p.y;
  }
  cx /= static_cast<double>(positions.size());
  cy /= static_cast<double>(positions.size());

  FormationConfiguration out;
  out.positions.reserve(positions.size());
  for (const auto& p : positions)
    out.positions.push_back({p.x - cx, p.y - cy});
  return out;
}

FormationConfiguration recentre_formation(const FormationConfiguration& formation)
{
  auto out = recentre_formation(std::span<const Vec2>(formation.positions));
  out.docking_edges = formation.docking_edges;
  return out;
}

FormationConfiguration rotate_formation(const FormationConfiguration& formation, double angle)
{
  const Pose2D rotation{0.0, 0.0, angle};
  FormationConfiguration out = formation;
  for (auto& p : out.positions)
    p = world_from_structure(rotation, p);
  return out;
}

}  // namespace omnimod
