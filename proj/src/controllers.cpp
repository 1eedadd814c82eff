#include "omnimod/controllers.hpp"

#include <algorithm>
#include <cmath>

#include "omnimod/error.hpp"

namespace omnimod
{

void ModuleGains::validate() const
{
  if (!(k_s1 > 0.0) || !(k_s2 > 0.0) || !(k_s3 > 0.0))
    throw Error(ErrorKind::parameter, "module gains must be strictly positive");
}

void StructureGains::validate() const
{
  if (!(k_x1 > 0.0) || !(k_x2 > 0.0) || !(k_y1 > 0.0) || !(k_y2 > 0.0) || !(k_theta1 > 0.0) ||
      !(k_theta2 > 0.0))
    throw Error(ErrorKind::parameter, "structure gains must be strictly positive");
  if (!(integral_limit > 0.0))
    throw Error(ErrorKind::parameter, "integral limit must be positive");
}

TrackingError world_tracking_error(const Pose2D& pose, const Pose2D& reference)
{
  return {reference.x - pose.x, reference.y - pose.y, wrap_to_pi(reference.theta - pose.theta)};
}

TrackingError body_tracking_error(const Pose2D& pose, const Pose2D& reference)
{
  const TrackingError w = world_tracking_error(pose, reference);
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  return {c * w.e_x + s * w.e_y, -s * w.e_x + c * w.e_y, w.e_theta};
}

ModuleCommand module_control_step(const Pose2D& pose,
                                  const Pose2D& reference,
                                  const ModuleReferenceVelocity& reference_velocity,
                                  const ModuleGains& gains,
                                  double dt)
{
  if (!(dt > 0.0))
    throw Error(ErrorKind::parameter, "dt must be positive");
  const TrackingError e = body_tracking_error(pose, reference);
  const double v_r = reference_velocity.v;

  ModuleCommand cmd;
  cmd.v_d = v_r * std::cos(e.e_theta) + gains.k_s1 * e.e_x;
  cmd.theta_dot_d =
    reference_velocity.omega + gains.k_s2 * v_r * e.e_y + gains.k_s3 * v_r * std::sin(e.e_theta);
  cmd.theta_d = wrap_to_2pi(pose.theta + cmd.theta_dot_d * dt);
  return cmd;
}

StructureCommand structure_control_step(const Pose2D& pose,
                                        const Pose2D& reference,
                                        const StructureTwist& reference_velocity,
                                        const StructureGains& gains,
                                        const IntegratorState& integrator,
                                        double dt)
{
  if (!(dt > 0.0))
    throw Error(ErrorKind::parameter, "dt must be positive");
  const TrackingError e = world_tracking_error(pose, reference);
  const double limit = gains.integral_limit;

  StructureCommand out;
  out.integrator.ix = std::clamp(integrator.ix + e.e_x * dt, -limit, limit);
  out.integrator.iy = std::clamp(integrator.iy + e.e_y * dt, -limit, limit);
  out.integrator.itheta = std::clamp(integrator.itheta + e.e_theta * dt, -limit, limit);

  out.twist.vx = reference_velocity.vx + gains.k_x1 * e.e_x + gains.k_x2 * out.integrator.ix;
  out.twist.vy = reference_velocity.vy + gains.k_y1 * e.e_y + gains.k_y2 * out.integrator.iy;
  out.twist.omega =
    reference_velocity.omega + gains.k_theta1 * e.e_theta + gains.k_theta2 * out.integrator.itheta;
  return out;
}

WheelSpeeds saturate_wheels(const WheelSpeeds& omegas, double omega_max)
{
  if (!(omega_max > 0.0))
    throw Error(ErrorKind::parameter, "omega_max must be positive");
  double peak = 0.0;
  for (double w : omegas.omegas)
    peak = std::max(peak, std::abs(w));
  if (peak <= omega_max)
    return omegas;
  const double scale = omega_max / peak;
  WheelSpeeds out = omegas;
  for (auto& w : out.omegas)
    w = std::clamp(w * scale, -omega_max, omega_max);  // rounding can overshoot by an ulp
  return out;
}

}  // namespace omnimod
