#include <gtest/gtest.h>

#include <set>

#include "omnimod/docking.hpp"
#include "omnimod/error.hpp"
#include "support.hpp"

using namespace omnimod;
using omnimod::testing::Gen;

namespace
{

FormationConfiguration pair_along_x(double d)
{
  FormationConfiguration f;
  f.positions = {{-d / 2, 0}, {d / 2, 0}, {d / 2, 0.3}};
  return f;
}

}  // namespace

TEST(Contour, VertexPositions)
{
  const DockingSpec spec;
  const auto v = contour_vertices(spec);
  ASSERT_EQ(v.size(), 24u);
  EXPECT_NEAR(v[0].x, 0.05, 1e-15);
  EXPECT_NEAR(v[0].y, 0.0, 1e-15);
  EXPECT_NEAR(v[6].x, 0.0, 1e-12);
  EXPECT_NEAR(v[6].y, 0.05, 1e-12);
}

TEST(Contour, EdgeLengthIsChord)
{
  const DockingSpec spec;
  const auto v = contour_vertices(spec);
  for (std::size_t k = 0; k < v.size(); ++k)
  {
    const auto& a = v[k];
    const auto& b = v[(k + 1) % v.size()];
    EXPECT_NEAR(std::hypot(b.x - a.x, b.y - a.y), spec.edge_length(), 1e-15);
  }
  EXPECT_NEAR(spec.edge_length(), 0.01305, 1e-5);
  EXPECT_NEAR(spec.apothem(), 0.05 * std::cos(std::numbers::pi / 24), 1e-15);
}

TEST(Contour, FaceNormalsBisectTheirEdges)
{
  const DockingSpec spec;
  const auto v = contour_vertices(spec);
  for (int k = 0; k < 24; ++k)
  {
    const Vec2 n = face_normal(spec, k);
    const auto& a = v[static_cast<std::size_t>(k)];
    const auto& b = v[static_cast<std::size_t>((k + 1) % 24)];
    EXPECT_NEAR(std::hypot(n.x, n.y), 1.0, 1e-15);
    EXPECT_NEAR(n.x * (b.x - a.x) + n.y * (b.y - a.y), 0.0, 1e-15);
    EXPECT_GT(n.x * (a.x + b.x) + n.y * (a.y + b.y), 0.0);
  }
}

TEST(ShearTorque, PrototypeValue)
{
  const double tau = shear_torque(1.29, 2 * 0.05 * std::sin(std::numbers::pi / 24));
  EXPECT_NEAR(tau, 8.42e-3, 1e-5);
  EXPECT_LT(std::abs(tau - 8.39e-3) / 8.39e-3, 0.01);
}

TEST(ShearTorque, ZeroForceAndLinearity)
{
  EXPECT_EQ(shear_torque(0.0, 0.013), 0.0);
  Gen g(41);
  for (int k = 0; k < 100; ++k)
  {
    const double f = g.uniform(0.1, 5);
    const double l = g.uniform(0.001, 0.05);
    const double c = g.uniform(0.1, 10);
    EXPECT_NEAR(shear_torque(f, 2 * l), 2 * shear_torque(f, l), 1e-15);
    EXPECT_NEAR(shear_torque(c * f, l), c * shear_torque(f, l), 1e-12);
    EXPECT_NEAR(shear_torque(f, c * l), c * shear_torque(f, l), 1e-12);
  }
}

TEST(Polarity, AlternatesAroundContour)
{
  for (int k = 0; k < 24; ++k)
  {
    EXPECT_EQ(face_polarity(k), -face_polarity((k + 1) % 24));
    EXPECT_EQ(faces_mate(k, (k + 11) % 24), true);
    EXPECT_EQ(faces_mate(k, (k + 12) % 24), false);
  }
}

TEST(DockingSites, TwoModulesAtTwiceApothem)
{
  const DockingSpec spec;
  FormationConfiguration f;
  const double d = 2 * spec.apothem();
  f.positions = {{0, 0}, {d, 0}};
  const auto sites = enumerate_docking_sites(f, spec);
  ASSERT_EQ(sites.size(), 1u);
  EXPECT_EQ(sites[0].module_a, 0u);
  EXPECT_EQ(sites[0].module_b, 1u);
  const Vec2 na = face_normal(spec, sites[0].face_a);
  const Vec2 nb = face_normal(spec, sites[0].face_b);
  EXPECT_GT(na.x, 0.9);
  EXPECT_LT(nb.x, -0.9);
  EXPECT_TRUE(faces_mate(sites[0].face_a, sites[0].face_b));
}

TEST(DockingSites, FarApartIsEmpty)
{
  FormationConfiguration f;
  f.positions = {{0, 0}, {1, 0}};
  EXPECT_TRUE(enumerate_docking_sites(f, DockingSpec{}).empty());
}

TEST(DockingSites, HexagonRing)
{
  const auto hex = omnimod::testing::hexagon_formation();
  const auto sites = enumerate_docking_sites(hex, DockingSpec{});
  ASSERT_EQ(sites.size(), 6u);
  std::vector<int> degree(6, 0);
  for (const auto& s : sites)
  {
    EXPECT_LT(s.module_a, s.module_b);
    ++degree[s.module_a];
    ++degree[s.module_b];
    const bool neighbours = (s.module_b - s.module_a == 1) || (s.module_a == 0 && s.module_b == 5);
    EXPECT_TRUE(neighbours);
  }
  for (int d : degree)
    EXPECT_EQ(d, 2);
}

TEST(DockingSites, RectangleBlock)
{
  const auto rect = omnimod::testing::rectangle_formation();
  const auto base = enumerate_docking_sites(rect, DockingSpec{});
  EXPECT_EQ(base.size(), 7u);
  for (const auto& s : base)
    EXPECT_LT(s.module_a, s.module_b);
}

TEST(Feasibility, CoincidentModulesOverlap)
{
  FormationConfiguration f;
  f.positions = {{0, 0}, {0, 0}, {0.1, 0}};
  const auto r = check_formation_feasible(f, DockingSpec{});
  EXPECT_FALSE(r.non_overlapping);
  EXPECT_FALSE(r.feasible());
  EXPECT_FALSE(r.failures.empty());
}

TEST(Feasibility, HexagonPassesAllChecks)
{
  const auto r = check_formation_feasible(omnimod::testing::hexagon_formation(), DockingSpec{});
  EXPECT_TRUE(r.connected);
  EXPECT_TRUE(r.non_overlapping);
  EXPECT_TRUE(r.polarity_consistent);
  EXPECT_TRUE(r.declared_edges_present);
  EXPECT_TRUE(r.feasible());
}

TEST(Feasibility, GappedLineIsDisconnected)
{
  FormationConfiguration f;
  f.positions = {{0, 0}, {0.12, 0}, {0.24, 0}};
  const auto r = check_formation_feasible(f, DockingSpec{});
  EXPECT_FALSE(r.connected);
  EXPECT_TRUE(r.non_overlapping);
}

TEST(Feasibility, DeclaredEdgesMustExist)
{
  auto hex = with_enumerated_edges(omnimod::testing::hexagon_formation(), DockingSpec{});
  EXPECT_TRUE(check_formation_feasible(hex, DockingSpec{}).feasible());
  hex.docking_edges.push_back({0, 3, 3, 15});
  const auto r = check_formation_feasible(hex, DockingSpec{});
  EXPECT_FALSE(r.declared_edges_present);
}

TEST(Feasibility, SameParityDeclaredEdgeBreaksPolarity)
{
  const DockingSpec spec;
  auto f = pair_along_x(2 * spec.apothem());
  f.positions.push_back({-spec.apothem(), 2 * spec.apothem()});
  f.positions = recentre_formation(f.positions).positions;
  const auto sites = enumerate_docking_sites(f, spec);
  ASSERT_FALSE(sites.empty());
  auto bad = f;
  auto edge = sites[0];
  edge.face_b = (edge.face_b + 1) % 24;
  bad.docking_edges = {edge};
  EXPECT_FALSE(check_formation_feasible(bad, spec).polarity_consistent);
}

TEST(Feasibility, DeclaredEdgesOfFeasibleFormationsAreEnumerated)
{
  Gen g(42);
  const DockingSpec spec;
  int feasible = 0;
  for (int k = 0; k < 200; ++k)
  {
    // random chain on the docking lattice
    std::vector<Vec2> ps{{0, 0}};
    const int n = g.integer(3, 7);
    while (static_cast<int>(ps.size()) < n)
    {
      const auto& from = ps[static_cast<std::size_t>(g.integer(0, static_cast<int>(ps.size()) - 1))];
      const double a = g.integer(0, 5) * std::numbers::pi / 3;
      const Vec2 p{from.x + 2 * spec.apothem() * std::cos(a), from.y + 2 * spec.apothem() * std::sin(a)};
      bool clash = false;
      for (const auto& q : ps)
        clash = clash || std::hypot(p.x - q.x, p.y - q.y) < 1.5 * spec.apothem();
      if (!clash)
        ps.push_back(p);
    }
    const auto f = with_enumerated_edges(recentre_formation(ps), spec);
    const auto r = check_formation_feasible(f, spec);
    if (!r.feasible())
      continue;
    ++feasible;
    const auto sites = enumerate_docking_sites(f, spec);
    const std::set<DockingSite> all(sites.begin(), sites.end());
    for (const auto& e : f.docking_edges)
      EXPECT_TRUE(all.count(e));
  }
  EXPECT_GT(feasible, 100);
}

TEST(DockingSpec, Validation)
{
  DockingSpec odd;
  odd.n_faces = 7;
  EXPECT_THROW(odd.validate(), Error);
  DockingSpec neg;
  neg.align_range = -1;
  EXPECT_THROW(neg.validate(), Error);
  EXPECT_NO_THROW(DockingSpec{}.validate());
}
