#pragma once

#include <span>

#include "omnimod/types.hpp"

namespace omnimod
{

/// Maps a point expressed in the structure frame into the world frame.
Vec2 world_from_structure(const Pose2D& structure_pose, const Vec2& local_point);

/// Rotates a world-frame twist into the body frame of a body with heading `theta`.
StructureTwist body_from_world(const StructureTwist& world, double theta);

/// Inverse of body_from_world.
StructureTwist world_from_body(const StructureTwist& body, double theta);

/// Subtracts the centroid so the returned positions are centred on the origin.
/// Throws ErrorKind::formation_size for fewer than three modules.
FormationConfiguration recentre_formation(std::span<const Vec2> positions);

/// Same, but keeps the docking edges of an existing configuration.
FormationConfiguration recentre_formation(const FormationConfiguration& formation);

/// Rotates every position by `angle` about the origin.
FormationConfiguration rotate_formation(const FormationConfiguration& formation, double angle);

}  // namespace omnimod
