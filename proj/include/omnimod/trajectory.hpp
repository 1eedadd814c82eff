#pragma once

#include <string>

#include "omnimod/types.hpp"

namespace omnimod
{

enum class PathKind
{
  circle,             ///< centre `origin`, `radius`, counter-clockwise from `phase`
  line,               ///< from `origin` along `direction` for `length`, then holds
  rounded_rectangle,  ///< centred on `origin`, `length` x `width`, `corner_radius`
  s_curve,            ///< from `origin` along `direction`; lateral `amplitude` sin(2 pi s / wavelength)
};

enum class HeadingMode
{
  tangent,    ///< heading follows the path tangent
  constant,   ///< heading = `heading`
  oscillate,  ///< heading + heading_amplitude sin(heading_frequency t)
};

/// Parameters of a reference trajectory. Lengths in m, angles in rad, rates per s.
struct TrajectoryParams
{
  PathKind path{PathKind::circle};
  HeadingMode heading_mode{HeadingMode::tangent};
  Vec2 origin{0.0, 0.0};
  double speed{0.05};  ///< path speed (s_curve: speed of the along-track coordinate)
  double radius{0.25};
  double phase{0.0};
  double direction{0.0};
  double length{1.0};
  double width{0.5};
  double corner_radius{0.1};
  double amplitude{0.1};
  double wavelength{1.0};
  double heading{0.0};
  double heading_amplitude{0.0};
  double heading_frequency{0.0};

  void validate() const;

  friend bool operator==(const TrajectoryParams&, const TrajectoryParams&) = default;
};

struct ReferenceSample
{
  Pose2D pose;
  StructureTwist velocity;  ///< world frame, the time derivative of `pose`
};

/// Reference pose and its analytic derivative at time t (t >= 0).
ReferenceSample reference_trajectory(const TrajectoryParams& params, double t);

/// Time after which the reference stops moving (infinity for closed paths).
double trajectory_end_time(const TrajectoryParams& params);

const char* to_string(PathKind kind);
const char* to_string(HeadingMode mode);
PathKind path_kind_from_string(const std::string& name);
HeadingMode heading_mode_from_string(const std::string& name);

}  // namespace omnimod
