#include "omnimod/kinematics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "omnimod/error.hpp"

namespace omnimod
{

VelocityMapper::VelocityMapper(Eigen::MatrixX3d matrix, double wheel_radius)
  : matrix_(std::move(matrix)), wheel_radius_(wheel_radius)
{
  if (!(wheel_radius_ > 0.0))
    throw Error(ErrorKind::parameter, "wheel radius must be positive");
  if (!matrix_.allFinite())
    throw Error(ErrorKind::configuration, "velocity mapper has non-finite entries");
}

BodyVelocity module_body_velocity(double omega, double theta, double wheel_radius)
{
  if (!(wheel_radius > 0.0))
    throw Error(ErrorKind::parameter, "wheel radius must be positive");
  const double v = omega * wheel_radius;
  return {v * std::cos(theta), v * std::sin(theta)};
}

double module_velocity_in_structure(const StructureTwist& twist, const Vec2& r, double theta)
{
  return (twist.vx - twist.omega * r.y) * std::cos(theta) +
         (twist.vy + twist.omega * r.x) * std::sin(theta);
}

VelocityMapper build_velocity_mapper(const FormationConfiguration& formation,
                                     const HeadingConfiguration& headings,
                                     double wheel_radius)
{
  if (formation.size() != headings.size())
    throw Error(ErrorKind::configuration,
                "formation has " + std::to_string(formation.size()) + " modules but " +
                  std::to_string(headings.size()) + " headings were given");
  if (!(wheel_radius > 0.0))
    throw Error(ErrorKind::parameter, "wheel radius must be positive");

  const auto n = static_cast<Eigen::Index>(formation.size());
  Eigen::MatrixX3d m(n, 3);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    const auto& r = formation.positions[static_cast<std::size_t>(i)];
    const double c = std::cos(headings.angles[static_cast<std::size_t>(i)]);
    const double s = std::sin(headings.angles[static_cast<std::size_t>(i)]);
    m(i, 0) = c / wheel_radius;
    m(i, 1) = s / wheel_radius;
    m(i, 2) = (r.x * s - r.y * c) / wheel_radius;
  }
  return VelocityMapper(std::move(m), wheel_radius);
}

WheelSpeeds wheels_from_twist(const VelocityMapper& mapper, const StructureTwist& twist)
{
  const Eigen::Vector3d v(twist.vx, twist.vy, twist.omega);
  const Eigen::VectorXd omega = mapper.matrix() * v;
  return {std::vector<double>(omega.data(), omega.data() + omega.size())};
}

std::array<double, 3> singular_values(const Eigen::MatrixX3d& m)
{
  std::array<double, 3> sigma{0.0, 0.0, 0.0};
  if (m.rows() == 0)
    return sigma;
  const Eigen::JacobiSVD<Eigen::MatrixX3d> svd(m);
  const auto& s = svd.singularValues();
  for (Eigen::Index k = 0; k < s.size() && k < 3; ++k)
    sigma[static_cast<std::size_t>(k)] = s(k);
  return sigma;
}

int numerical_rank(const std::array<double, 3>& sigma, std::size_t rows)
{
  const double threshold =
    sigma[0] * static_cast<double>(rows) * std::numeric_limits<double>::epsilon() * 16.0;
  int rank = 0;
  for (double s : sigma)
    if (s > threshold)
      ++rank;
  return rank;
}

MapperMetrics mapper_metrics(const VelocityMapper& mapper)
{
  MapperMetrics out;
  out.singular_values = singular_values(mapper.matrix());
  out.rank = numerical_rank(out.singular_values, mapper.rows());
  out.sigma_max = out.singular_values[0];
  out.condition_number = out.rank < 3 ? std::numeric_limits<double>::infinity()
                                      : out.singular_values[0] / out.singular_values[2];
  return out;
}

StructureTwist twist_from_wheels(const VelocityMapper& mapper, const WheelSpeeds& omegas)
{
  if (omegas.size() != mapper.rows())
    throw Error(ErrorKind::configuration, "wheel speed count does not match mapper rows");

  const Eigen::JacobiSVD<Eigen::MatrixX3d> svd(mapper.matrix(),
                                               Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  std::array<double, 3> sigma{s(0), s.size() > 1 ? s(1) : 0.0, s.size() > 2 ? s(2) : 0.0};
  if (numerical_rank(sigma, mapper.rows()) < 3)
    throw Error(ErrorKind::degenerate_mapper, "velocity mapper is rank deficient");

  const Eigen::Map<const Eigen::VectorXd> w(omegas.omegas.data(),
                                            static_cast<Eigen::Index>(omegas.size()));
  const Eigen::Vector3d utw = svd.matrixU().transpose() * w;
  const Eigen::Vector3d v = svd.matrixV() * utw.cwiseQuotient(s);
  return {v(0), v(1), v(2)};
}

}  // namespace omnimod
