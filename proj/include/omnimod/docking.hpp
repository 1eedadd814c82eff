#pragma once

#include <string>
#include <vector>

#include "omnimod/types.hpp"

namespace omnimod
{

/// Geometry and strength of the polygonal magnet-array contour.
/// Face k spans vertices k and k+1; vertex 0 lies on the module's +x axis.
struct DockingSpec
{
  int n_faces{24};
  double circumradius{0.050};         // m
  double magnet_tensile_force{1.29};  // N
  double align_range{0.010};          // m
  double magnet_inset{0.001};         // m

  void validate() const;

  double apothem() const;
  double edge_length() const;
  /// Largest angle between one face normal and the reversed partner normal
  /// that passive alignment can still close: atan(align_range / edge_length).
  double angular_tolerance() const;

  friend bool operator==(const DockingSpec&, const DockingSpec&) = default;
};

using DockingSite = DockingEdge;

struct FeasibilityReport
{
  bool connected{false};
  bool non_overlapping{false};
  bool polarity_consistent{false};
  bool declared_edges_present{false};
  std::vector<std::string> failures;

  bool feasible() const
  {
    return connected && non_overlapping && polarity_consistent && declared_edges_present;
  }
};

std::vector<Vec2> contour_vertices(const DockingSpec& spec);

/// Outward unit normal of face `face` in the module frame.
Vec2 face_normal(const DockingSpec& spec, int face);

/// Torque needed to slide one docked face over the next: F * edge / 2.
double shear_torque(double tensile_force, double edge_length);

/// Magnet polarity of a face: +1 (N) for even faces, -1 (S) for odd faces.
int face_polarity(int face);

/// True if the two faces present opposite poles.
bool faces_mate(int face_a, int face_b);

/// Every module pair whose best-matching faces (antiparallel within the angular
/// tolerance) have midpoints no further apart than align_range. One site per
/// pair, stored with module_a < module_b; ties go to the smallest face pair.
std::vector<DockingSite> enumerate_docking_sites(const FormationConfiguration& formation,
                                                 const DockingSpec& spec);

FeasibilityReport check_formation_feasible(const FormationConfiguration& formation,
                                           const DockingSpec& spec);

/// Formation with docking_edges filled from enumerate_docking_sites.
FormationConfiguration with_enumerated_edges(const FormationConfiguration& formation,
                                             const DockingSpec& spec);

}  // namespace omnimod
