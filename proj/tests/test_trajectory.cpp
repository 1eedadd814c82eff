#include <gtest/gtest.h>

#include <cmath>

#include "omnimod/error.hpp"
#include "omnimod/trajectory.hpp"

using namespace omnimod;

namespace
{

TrajectoryParams make(PathKind path, HeadingMode mode)
{
  TrajectoryParams p;
  p.path = path;
  p.heading_mode = mode;
  p.speed = 0.04;
  p.heading = 0.3;
  p.heading_amplitude = 0.4;
  p.heading_frequency = 0.5;
  p.length = 1.2;
  p.width = 0.6;
  p.corner_radius = 0.12;
  p.amplitude = 0.1;
  p.wavelength = 0.5;
  p.radius = 0.3;
  p.direction = 0.6;
  p.origin = {0.2, -0.1};
  return p;
}

}  // namespace

TEST(Reference, CircleOfCaseOne)
{
  TrajectoryParams p;
  p.path = PathKind::circle;
  p.radius = 0.25;
  p.speed = 0.05;
  const double w = 0.05 / 0.25;
  for (double t : {0.0, 1.0, 7.5, 31.0})
  {
    const auto s = reference_trajectory(p, t);
    EXPECT_NEAR(s.pose.x, 0.25 * std::cos(w * t), 1e-12);
    EXPECT_NEAR(s.pose.y, 0.25 * std::sin(w * t), 1e-12);
    EXPECT_NEAR(s.pose.theta, wrap_to_2pi(w * t + std::numbers::pi / 2), 1e-12);
    EXPECT_NEAR(std::hypot(s.velocity.vx, s.velocity.vy), 0.25 * w, 1e-12);
    EXPECT_NEAR(s.velocity.omega, w, 1e-12);
  }
}

TEST(Reference, StraightLine)
{
  TrajectoryParams p;
  p.path = PathKind::line;
  p.heading_mode = HeadingMode::tangent;
  p.direction = 0.5;
  p.speed = 0.03;
  p.length = 2.0;
  for (double t : {0.0, 3.0, 20.0})
  {
    const auto s = reference_trajectory(p, t);
    EXPECT_NEAR(s.velocity.vx, 0.03 * std::cos(0.5), 1e-15);
    EXPECT_NEAR(s.velocity.vy, 0.03 * std::sin(0.5), 1e-15);
    EXPECT_EQ(s.velocity.omega, 0.0);
    EXPECT_NEAR(s.pose.theta, 0.5, 1e-15);
  }
  const auto end = reference_trajectory(p, 1000.0);
  EXPECT_NEAR(end.pose.x, 2.0 * std::cos(0.5), 1e-12);
  EXPECT_EQ(end.velocity.vx, 0.0);
  EXPECT_NEAR(trajectory_end_time(p), 2.0 / 0.03, 1e-12);
}

TEST(Reference, VelocityIsDerivativeOfPose)
{
  const double h = 1e-6;
  for (auto path : {PathKind::circle, PathKind::line, PathKind::rounded_rectangle, PathKind::s_curve})
  {
    for (auto mode : {HeadingMode::tangent, HeadingMode::constant, HeadingMode::oscillate})
    {
      const auto p = make(path, mode);
      for (double t = 0.13; t < 25.0; t += 0.731)
      {
        const auto a = reference_trajectory(p, t);
        const auto b = reference_trajectory(p, t + h);
        const double end = trajectory_end_time(p);
        if (t < end && t + h >= end)
          continue;
        EXPECT_NEAR((b.pose.x - a.pose.x) / h, a.velocity.vx, 1e-5)
          << to_string(path) << '/' << to_string(mode) << " t=" << t;
        EXPECT_NEAR((b.pose.y - a.pose.y) / h, a.velocity.vy, 1e-5)
          << to_string(path) << '/' << to_string(mode) << " t=" << t;
        EXPECT_NEAR(wrap_to_pi(b.pose.theta - a.pose.theta) / h, a.velocity.omega, 1e-4)
          << to_string(path) << '/' << to_string(mode) << " t=" << t;
      }
    }
  }
}

TEST(Reference, TangentHeadingFollowsVelocity)
{
  for (auto path : {PathKind::circle, PathKind::rounded_rectangle, PathKind::s_curve})
  {
    const auto p = make(path, HeadingMode::tangent);
    for (double t = 0.0; t < 20.0; t += 0.37)
    {
      const auto s = reference_trajectory(p, t);
      const double dir = std::atan2(s.velocity.vy, s.velocity.vx);
      EXPECT_NEAR(wrap_to_pi(s.pose.theta - dir), 0.0, 1e-9) << to_string(path) << " t=" << t;
    }
  }
}

TEST(Reference, RoundedRectangleIsClosedAndContinuous)
{
  const auto p = make(PathKind::rounded_rectangle, HeadingMode::tangent);
  const double rc = p.corner_radius;
  const double perimeter =
    2 * (p.length - 2 * rc) + 2 * (p.width - 2 * rc) + 2 * std::numbers::pi * rc;
  const double period = perimeter / p.speed;
  const auto a = reference_trajectory(p, 0.0);
  const auto b = reference_trajectory(p, period);
  EXPECT_NEAR(a.pose.x, b.pose.x, 1e-9);
  EXPECT_NEAR(a.pose.y, b.pose.y, 1e-9);
  auto prev = a;
  for (double t = 0.01; t <= period; t += 0.01)
  {
    const auto s = reference_trajectory(p, t);
    EXPECT_LT(std::hypot(s.pose.x - prev.pose.x, s.pose.y - prev.pose.y), p.speed * 0.01 * 1.0001);
    prev = s;
  }
}

TEST(Reference, NamesRoundTrip)
{
  for (auto k : {PathKind::circle, PathKind::line, PathKind::rounded_rectangle, PathKind::s_curve})
    EXPECT_EQ(path_kind_from_string(to_string(k)), k);
  for (auto m : {HeadingMode::tangent, HeadingMode::constant, HeadingMode::oscillate})
    EXPECT_EQ(heading_mode_from_string(to_string(m)), m);
  try
  {
    path_kind_from_string("spiral");
    FAIL();
  }
  catch (const Error& e)
  {
    EXPECT_EQ(e.kind(), ErrorKind::configuration);
  }
}

TEST(Reference, Validation)
{
  auto p = make(PathKind::circle, HeadingMode::tangent);
  p.radius = 0;
  EXPECT_THROW(p.validate(), Error);
  p = make(PathKind::rounded_rectangle, HeadingMode::tangent);
  p.width = 0.1;
  EXPECT_THROW(p.validate(), Error);
  EXPECT_NO_THROW(make(PathKind::s_curve, HeadingMode::oscillate).validate());
}
