#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "omnimod/frames.hpp"
#include "omnimod/kinematics.hpp"
#include "omnimod/types.hpp"

namespace omnimod::testing
{

/// Small generator for property sweeps; each test seeds its own.
class Gen
{
public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double angle() { return uniform(0.0, kTwoPi); }

  FormationConfiguration formation(int n, double spread = 0.3)
  {
    std::vector<Vec2> ps;
    for (int i = 0; i < n; ++i)
      ps.push_back({uniform(-spread, spread), uniform(-spread, spread)});
    return recentre_formation(ps);
  }

  HeadingConfiguration headings(std::size_t n)
  {
    HeadingConfiguration h;
    for (std::size_t i = 0; i < n; ++i)
      h.angles.push_back(angle());
    return h;
  }

  StructureTwist twist(double scale = 1.0)
  {
    return {uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale)};
  }

private:
  std::mt19937_64 rng_;
};

/// Six modules in two rows of three, docked face to face.
inline FormationConfiguration rectangle_formation()
{
  const double s = 2.0 * 0.05 * std::cos(std::numbers::pi / 24.0);
  return recentre_formation(std::vector<Vec2>{{0, 0}, {s, 0}, {2 * s, 0}, {0, s}, {s, s}, {2 * s, s}});
}

/// Six modules on a ring around a central object, neighbours docked.
inline FormationConfiguration hexagon_formation()
{
  const double s = 2.0 * 0.05 * std::cos(std::numbers::pi / 24.0);
  std::vector<Vec2> ps;
  for (int k = 0; k < 6; ++k)
    ps.push_back({s * std::cos(k * std::numbers::pi / 3.0), s * std::sin(k * std::numbers::pi / 3.0)});
  return recentre_formation(ps);
}

inline FormationConfiguration unit_triangle()
{
  std::vector<Vec2> ps;
  for (int k = 0; k < 3; ++k)
    ps.push_back({std::cos(k * kTwoPi / 3.0), std::sin(k * kTwoPi / 3.0)});
  return recentre_formation(ps);
}

/// Wheel speed of one module written out from the rigid-body velocity of its centre.
inline double wheel_speed_oracle(const StructureTwist& v, const Vec2& r, double theta, double R)
{
  const double px = v.vx - v.omega * r.y;
  const double py = v.vy + v.omega * r.x;
  return (px * std::cos(theta) + py * std::sin(theta)) / R;
}

/// Eigenvalues of M^T M via a symmetric eigensolver; an SVD-free path to singular values.
inline Eigen::Vector3d gram_singular_values(const Eigen::MatrixX3d& m)
{
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(m.transpose() * m);
  Eigen::Vector3d ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return ev.reverse();
}

inline double relative_error(double a, double b)
{
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace omnimod::testing
