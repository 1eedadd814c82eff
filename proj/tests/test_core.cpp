#include <gtest/gtest.h>

#include "omnimod/error.hpp"
#include "omnimod/frames.hpp"
#include "support.hpp"

using namespace omnimod;
using omnimod::testing::Gen;

namespace
{

void expect_vec(const Vec2& a, const Vec2& b, double tol = 1e-12)
{
  EXPECT_NEAR(a.x, b.x, tol);
  EXPECT_NEAR(a.y, b.y, tol);
}

}  // namespace

TEST(WorldFromStructure, IdentityPose)
{
  expect_vec(world_from_structure({0, 0, 0}, {1, 0}), {1, 0});
}

TEST(WorldFromStructure, QuarterTurn)
{
  expect_vec(world_from_structure({0, 0, std::numbers::pi / 2}, {1, 0}), {0, 1});
}

TEST(WorldFromStructure, HalfTurnWithTranslation)
{
  expect_vec(world_from_structure({2, 3, std::numbers::pi}, {1, 1}), {1, 2});
}

TEST(WorldFromStructure, PreservesDistances)
{
  Gen g(11);
  for (int k = 0; k < 500; ++k)
  {
    const Pose2D pose{g.uniform(-5, 5), g.uniform(-5, 5), g.angle()};
    const Vec2 a{g.uniform(-1, 1), g.uniform(-1, 1)};
    const Vec2 b{g.uniform(-1, 1), g.uniform(-1, 1)};
    const Vec2 wa = world_from_structure(pose, a);
    const Vec2 wb = world_from_structure(pose, b);
    EXPECT_NEAR(std::hypot(wa.x - wb.x, wa.y - wb.y), std::hypot(a.x - b.x, a.y - b.y), 1e-12);
  }
}

TEST(Recentre, LineOfThree)
{
  const auto f = recentre_formation(std::vector<Vec2>{{1, 0}, {2, 0}, {3, 0}});
  ASSERT_EQ(f.size(), 3u);
  expect_vec(f.positions[0], {-1, 0});
  expect_vec(f.positions[1], {0, 0});
  expect_vec(f.positions[2], {1, 0});
}

TEST(Recentre, Square)
{
  const auto f = recentre_formation(std::vector<Vec2>{{0, 0}, {0, 2}, {2, 0}, {2, 2}});
  expect_vec(f.positions[0], {-1, -1});
  expect_vec(f.positions[1], {-1, 1});
  expect_vec(f.positions[2], {1, -1});
  expect_vec(f.positions[3], {1, 1});
}

TEST(Recentre, CentredHexagonIsFixedPoint)
{
  const auto hex = omnimod::testing::hexagon_formation();
  const auto again = recentre_formation(hex);
  for (std::size_t i = 0; i < hex.size(); ++i)
    expect_vec(again.positions[i], hex.positions[i]);
}

TEST(Recentre, RejectsFewerThanThree)
{
  try
  {
    recentre_formation(std::vector<Vec2>{{0, 0}, {1, 0}});
    FAIL() << "expected an error";
  }
  catch (const Error& e)
  {
    EXPECT_EQ(e.kind(), ErrorKind::formation_size);
  }
}

TEST(Recentre, IdempotentAndCentred)
{
  Gen g(12);
  for (int k = 0; k < 300; ++k)
  {
    std::vector<Vec2> ps;
    const int n = g.integer(3, 9);
    for (int i = 0; i < n; ++i)
      ps.push_back({g.uniform(-3, 7), g.uniform(-2, 4)});
    const auto once = recentre_formation(ps);
    const auto twice = recentre_formation(once);
    double cx = 0, cy = 0;
    for (std::size_t i = 0; i < once.size(); ++i)
    {
      expect_vec(twice.positions[i], once.positions[i]);
      cx += once.positions[i].x;
      cy += once.positions[i].y;
    }
    EXPECT_NEAR(cx / n, 0.0, 1e-9);
    EXPECT_NEAR(cy / n, 0.0, 1e-9);
  }
}

TEST(Recentre, KeepsDockingEdges)
{
  FormationConfiguration f;
  f.positions = {{1, 1}, {2, 1}, {3, 1}};
  f.docking_edges = {{0, 0, 1, 11}};
  EXPECT_EQ(recentre_formation(f).docking_edges, f.docking_edges);
}

TEST(Pose, HeadingWrappedIntoHalfOpenRange)
{
  Gen g(13);
  for (int k = 0; k < 1000; ++k)
  {
    const Pose2D p{0, 0, g.uniform(-50, 50)};
    EXPECT_GE(p.theta, 0.0);
    EXPECT_LT(p.theta, kTwoPi);
  }
  EXPECT_LT(Pose2D(0, 0, -1e-18).theta, kTwoPi);
  EXPECT_EQ(Pose2D(0, 0, kTwoPi).theta, 0.0);
}

TEST(Angles, WrapToPiRange)
{
  EXPECT_NEAR(wrap_to_pi(3 * std::numbers::pi / 2), -std::numbers::pi / 2, 1e-12);
  EXPECT_NEAR(wrap_to_pi(std::numbers::pi), std::numbers::pi, 1e-12);
  EXPECT_NEAR(wrap_to_pi(-std::numbers::pi), std::numbers::pi, 1e-12);
}

TEST(ModuleSpec, DefaultsAreValid)
{
  const ModuleSpec spec;
  EXPECT_NO_THROW(spec.validate());
  EXPECT_NEAR(spec.max_wheel_speed, 2.607, 1e-3);
  EXPECT_EQ(spec.n_faces, 24);
}

TEST(ModuleSpec, RejectsOddFacesAndNonPositiveQuantities)
{
  ModuleSpec odd;
  odd.n_faces = 23;
  EXPECT_THROW(odd.validate(), Error);
  ModuleSpec zero_radius;
  zero_radius.wheel_radius = 0.0;
  EXPECT_THROW(zero_radius.validate(), Error);
  ModuleSpec negative_mass;
  negative_mass.mass = -1.0;
  EXPECT_THROW(negative_mass.validate(), Error);
}
