#pragma once

#include <array>

#include <Eigen/Dense>

#include "omnimod/types.hpp"

namespace omnimod
{

/// n x 3 matrix mapping a structure-frame twist to wheel angular velocities.
/// Row i is (1/R) [cos t_i, sin t_i, r_ix sin t_i - r_iy cos t_i].
class VelocityMapper
{
public:
  VelocityMapper(Eigen::MatrixX3d matrix, double wheel_radius);

  const Eigen::MatrixX3d& matrix() const { return matrix_; }
  double wheel_radius() const { return wheel_radius_; }
  std::size_t rows() const { return static_cast<std::size_t>(matrix_.rows()); }

private:
  Eigen::MatrixX3d matrix_;
  double wheel_radius_;
};

struct MapperMetrics
{
  int rank{0};
  double condition_number{0.0};  ///< +inf when rank < 3
  double sigma_max{0.0};
  std::array<double, 3> singular_values{};  ///< descending
};

struct BodyVelocity
{
  double vx{0.0};
  double vy{0.0};
};

/// Velocity of a single module driving its wheel at `omega` with heading `theta`.
BodyVelocity module_body_velocity(double omega, double theta, double wheel_radius);

/// Speed along the wheel axis of a module at `r` (structure frame) when the
/// structure moves with `twist`.
double module_velocity_in_structure(const StructureTwist& twist, const Vec2& r, double theta);

VelocityMapper build_velocity_mapper(const FormationConfiguration& formation,
                                     const HeadingConfiguration& headings,
                                     double wheel_radius);

WheelSpeeds wheels_from_twist(const VelocityMapper& mapper, const StructureTwist& twist);

/// Least-squares twist for the given wheel speeds (SVD pseudoinverse).
/// Throws ErrorKind::degenerate_mapper when the mapper is not full rank.
StructureTwist twist_from_wheels(const VelocityMapper& mapper, const WheelSpeeds& omegas);

MapperMetrics mapper_metrics(const VelocityMapper& mapper);

/// Singular values of an n x 3 matrix, descending.
std::array<double, 3> singular_values(const Eigen::MatrixX3d& m);

/// Count of singular values above sigma_1 * rows * eps * 16.
int numerical_rank(const std::array<double, 3>& sigma, std::size_t rows);

}  // namespace omnimod
