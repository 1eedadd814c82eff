#pragma once

#include <cstddef>
#include <numbers>
#include <vector>

namespace omnimod
{

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps an angle into [0, 2pi).
double wrap_to_2pi(double angle);

/// Wraps an angle into (-pi, pi].
double wrap_to_pi(double angle);

struct Vec2
{
  double x{0.0};
  double y{0.0};

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// Planar pose in the world frame. theta is kept in [0, 2pi).
struct Pose2D
{
  double x{0.0};
  double y{0.0};
  double theta{0.0};

  Pose2D() = default;
  Pose2D(double x_, double y_, double theta_) : x(x_), y(y_), theta(wrap_to_2pi(theta_)) {}

  Vec2 position() const { return {x, y}; }

  friend bool operator==(const Pose2D&, const Pose2D&) = default;
};

/// Physical parameters of one module; defaults describe the desk-scale prototype.
struct ModuleSpec
{
  double contour_circumradius{0.050};  // m
  double wheel_radius{0.028};          // m
  double max_wheel_speed{0.073 / 0.028};  // rad/s, max module speed over wheel radius
  double mass{0.253};                  // kg
  int n_faces{24};
  double max_steering_rate{kTwoPi};    // rad/s, slew limit of the steering motor

  /// Throws ErrorKind::parameter if a quantity is non-positive or n_faces is odd.
  void validate() const;

  friend bool operator==(const ModuleSpec&, const ModuleSpec&) = default;
};

/// Docking face pairing between two modules. Stored with module_a < module_b.
struct DockingEdge
{
  std::size_t module_a{0};
  int face_a{0};
  std::size_t module_b{0};
  int face_b{0};

  friend bool operator==(const DockingEdge&, const DockingEdge&) = default;
  friend auto operator<=>(const DockingEdge&, const DockingEdge&) = default;
};

/// Module positions in the structure frame plus docking topology.
/// Positions are centred on their unweighted centroid (see recentre_formation).
struct FormationConfiguration
{
  std::vector<Vec2> positions;
  std::vector<DockingEdge> docking_edges;

  std::size_t size() const { return positions.size(); }

  friend bool operator==(const FormationConfiguration&, const FormationConfiguration&) = default;
};

/// Wheel heading of each module in the structure frame, each in [0, 2pi).
struct HeadingConfiguration
{
  std::vector<double> angles;

  std::size_t size() const { return angles.size(); }

  friend bool operator==(const HeadingConfiguration&, const HeadingConfiguration&) = default;
};

/// 3-DoF planar velocity (v_x, v_y, yaw rate).
struct StructureTwist
{
  double vx{0.0};
  double vy{0.0};
  double omega{0.0};

  friend bool operator==(const StructureTwist&, const StructureTwist&) = default;
};

struct WheelSpeeds
{
  std::vector<double> omegas;  // rad/s

  std::size_t size() const { return omegas.size(); }

  friend bool operator==(const WheelSpeeds&, const WheelSpeeds&) = default;
};

}  // namespace omnimod
