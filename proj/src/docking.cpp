#include "omnimod/docking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "omnimod/error.hpp"

namespace omnimod
{

void DockingSpec::validate() const
{
  if (n_faces < 3 || n_faces % 2 != 0)
    throw Error(ErrorKind::parameter, "docking spec: n_faces must be even and at least 4");
  if (!(circumradius > 0.0) || !(align_range > 0.0) || !(magnet_inset > 0.0) ||
      !(magnet_tensile_force > 0.0))
    throw Error(ErrorKind::parameter, "docking spec: lengths and forces must be positive");
}

double DockingSpec::apothem() const
{
  return circumradius * std::cos(std::numbers::pi / n_faces);
}

double DockingSpec::edge_length() const
{
  return 2.0 * circumradius * std::sin(std::numbers::pi / n_faces);
}

double DockingSpec::angular_tolerance() const
{
  return std::atan2(align_range, edge_length());
}

std::vector<Vec2> contour_vertices(const DockingSpec& spec)
{
  std::vector<Vec2> out;
  out.reserve(static_cast<std::size_t>(spec.n_faces));
  for (int k = 0; k < spec.n_faces; ++k)
  {
    const double a = kTwoPi * k / spec.n_faces;
    out.push_back({spec.circumradius * std::cos(a), spec.circumradius * std::sin(a)});
  }
  return out;
}

Vec2 face_normal(const DockingSpec& spec, int face)
{
  const double a = kTwoPi * (face + 0.5) / spec.n_faces;
  return {std::cos(a), std::sin(a)};
}

double shear_torque(double tensile_force, double edge_length)
{
  return tensile_force * edge_length / 2.0;
}

int face_polarity(int face)
{
  return face % 2 == 0 ? 1 : -1;
}

bool faces_mate(int face_a, int face_b)
{
  return face_polarity(face_a) != face_polarity(face_b);
}

namespace
{

struct FaceMatch
{
  int face_a{-1};
  int face_b{-1};
  double distance{0.0};
};

/// Best face pair between modules at pa and pb, or face_a = -1 when none fits.
FaceMatch best_face_pair(const Vec2& pa, const Vec2& pb, const DockingSpec& spec)
{
  const double apothem = spec.apothem();
  const double cos_tol = std::cos(spec.angular_tolerance());
  FaceMatch best;
  best.distance = std::numeric_limits<double>::infinity();

  for (int fa = 0; fa < spec.n_faces; ++fa)
  {
    const Vec2 na = face_normal(spec, fa);
    const Vec2 ma{pa.x + apothem * na.x, pa.y + apothem * na.y};
    for (int fb = 0; fb < spec.n_faces; ++fb)
    {
      const Vec2 nb = face_normal(spec, fb);
      // antiparallel within tolerance: n_a . (-n_b) >= cos(tol)
      if (-(na.x * nb.x + na.y * nb.y) < cos_tol)
        continue;
      const Vec2 mb{pb.x + apothem * nb.x, pb.y + apothem * nb.y};
      const double d = std::hypot(ma.x - mb.x, ma.y - mb.y);
      // iteration order is lexicographic, so strict '<' keeps the smallest pair on ties
      if (d < best.distance - 1e-12)
        best = {fa, fb, d};
    }
  }
  if (best.distance > spec.align_range)
    best.face_a = -1;
  return best;
}

class DisjointSet
{
public:
  explicit DisjointSet(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t i)
  {
    while (parent_[i] != i)
    {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

private:
  std::vector<std::size_t> parent_;
};

}  // namespace

std::vector<DockingSite> enumerate_docking_sites(const FormationConfiguration& formation,
                                                 const DockingSpec& spec)
{
  spec.validate();
  std::vector<DockingSite> sites;
  const auto& p = formation.positions;
  const double reach = 2.0 * spec.circumradius + spec.align_range;
  for (std::size_t a = 0; a < p.size(); ++a)
  {
    for (std::size_t b = a + 1; b < p.size(); ++b)
    {
      if (std::hypot(p[b].x - p[a].x, p[b].y - p[a].y) > reach)
        continue;
      const FaceMatch m = best_face_pair(p[a], p[b], spec);
      if (m.face_a >= 0)
        sites.push_back({a, m.face_a, b, m.face_b});
    }
  }
  return sites;
}

FeasibilityReport check_formation_feasible(const FormationConfiguration& formation,
                                           const DockingSpec& spec)
{
  FeasibilityReport report;
  const auto& p = formation.positions;
  const std::size_t n = p.size();

  const double min_distance = 2.0 * spec.apothem() - spec.align_range;
  report.non_overlapping = true;
  for (std::size_t a = 0; a < n; ++a)
  {
    for (std::size_t b = a + 1; b < n; ++b)
    {
      if (std::hypot(p[b].x - p[a].x, p[b].y - p[a].y) < min_distance)
      {
        report.non_overlapping = false;
        report.failures.push_back("modules " + std::to_string(a) + " and " + std::to_string(b) +
                                  " overlap");
      }
    }
  }

  const auto sites = enumerate_docking_sites(formation, spec);
  DisjointSet components(n);
  for (const auto& s : sites)
    components.unite(s.module_a, s.module_b);
  report.connected = n > 0;
  for (std::size_t i = 1; i < n; ++i)
  {
    if (components.find(i) != components.find(0))
    {
      report.connected = false;
      report.failures.push_back("module " + std::to_string(i) +
                                " is not docked to the rest of the structure");
    }
  }

  // Declared edges are canonicalised to module_a < module_b before comparison.
  report.declared_edges_present = true;
  std::vector<DockingEdge> declared;
  for (auto e : formation.docking_edges)
  {
    if (e.module_a > e.module_b)
      e = {e.module_b, e.face_b, e.module_a, e.face_a};
    declared.push_back(e);
    if (std::find(sites.begin(), sites.end(), e) == sites.end())
    {
      report.declared_edges_present = false;
      report.failures.push_back("declared docking edge (" + std::to_string(e.module_a) + ":" +
                                std::to_string(e.face_a) + ", " + std::to_string(e.module_b) +
                                ":" + std::to_string(e.face_b) + ") is not geometrically realised");
    }
  }

  report.polarity_consistent = true;
  const auto& checked = declared.empty() ? sites : declared;
  for (const auto& e : checked)
  {
    if (!faces_mate(e.face_a, e.face_b))
    {
      report.polarity_consistent = false;
      report.failures.push_back("faces " + std::to_string(e.face_a) + " and " +
                                std::to_string(e.face_b) + " of modules " +
                                std::to_string(e.module_a) + " and " + std::to_string(e.module_b) +
                                " present the same pole");
    }
  }
  return report;
}

FormationConfiguration with_enumerated_edges(const FormationConfiguration& formation,
                                             const DockingSpec& spec)
{
  FormationConfiguration out = formation;
  out.docking_edges = enumerate_docking_sites(formation, spec);
  return out;
}

}  // namespace omnimod
