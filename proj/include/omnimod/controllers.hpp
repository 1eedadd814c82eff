#pragma once

#include "omnimod/types.hpp"

namespace omnimod
{

/// Gains of the single-module tracking law.
struct ModuleGains
{
  double k_s1{1.0};
  double k_s2{8.0};
  double k_s3{2.0};

  void validate() const;

  friend bool operator==(const ModuleGains&, const ModuleGains&) = default;
};

/// PI gains of the structure tracking law, per axis.
struct StructureGains
{
  double k_x1{1.5};
  double k_x2{0.1};
  double k_y1{1.5};
  double k_y2{0.1};
  double k_theta1{2.0};
  double k_theta2{0.1};
  double integral_limit{0.5};  ///< clamp on each accumulated error

  void validate() const;

  friend bool operator==(const StructureGains&, const StructureGains&) = default;
};

struct TrackingError
{
  double e_x{0.0};
  double e_y{0.0};
  double e_theta{0.0};  ///< wrapped to (-pi, pi]
};

struct IntegratorState
{
  double ix{0.0};
  double iy{0.0};
  double itheta{0.0};

  friend bool operator==(const IntegratorState&, const IntegratorState&) = default;
};

struct ModuleReferenceVelocity
{
  double v{0.0};      ///< m/s along the reference heading
  double omega{0.0};  ///< rad/s
};

struct ModuleCommand
{
  double v_d{0.0};          ///< desired module speed, m/s
  double theta_dot_d{0.0};  ///< desired heading rate, rad/s
  double theta_d{0.0};      ///< desired heading after dt, [0, 2pi)
};

/// World-frame tracking error (reference minus actual), heading error wrapped.
TrackingError world_tracking_error(const Pose2D& pose, const Pose2D& reference);

/// Tracking error rotated into the body frame of `pose` (x along the heading).
TrackingError body_tracking_error(const Pose2D& pose, const Pose2D& reference);

/// Kinematic tracking law of a single module, errors taken in its body frame:
///   v_d     = v_r cos(e_t) + k_s1 e_x
///   theta'_d = w_r + k_s2 v_r e_y + k_s3 v_r sin(e_t)
ModuleCommand module_control_step(const Pose2D& pose,
                                  const Pose2D& reference,
                                  const ModuleReferenceVelocity& reference_velocity,
                                  const ModuleGains& gains,
                                  double dt);

struct StructureCommand
{
  StructureTwist twist;  ///< world frame
  IntegratorState integrator;
};

/// PI tracking law of a docked structure, per world axis:
///   v_d = v_r + k1 e + k2 int(e) dt, with the integrals clamped to +-integral_limit.
StructureCommand structure_control_step(const Pose2D& pose,
                                        const Pose2D& reference,
                                        const StructureTwist& reference_velocity,
                                        const StructureGains& gains,
                                        const IntegratorState& integrator,
                                        double dt);

/// Scales all wheel speeds by one factor so that none exceeds omega_max.
WheelSpeeds saturate_wheels(const WheelSpeeds& omegas, double omega_max);

}  // namespace omnimod
