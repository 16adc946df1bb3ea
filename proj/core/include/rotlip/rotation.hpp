#pragma once

#include <string_view>

#include "rotlip/curve.hpp"

namespace rotlip {

enum class RotationMode { absolute, signed_ };

std::string_view mode_name(RotationMode mode);
RotationMode parse_mode(std::string_view text);

/// Length (radians) of the spherical image of c seen from x0. The error
/// estimate compares against the same sum taken over every other sample.
RotationResult absolute_rotation_point(const Curve& c, const Vector& x0);

/// Accumulated polar angle of a planar curve around x0, in turns.
RotationResult signed_winding_plane(const Curve& c, const Vector& x0);

/// Rotation of the projection of c onto the orthogonal complement of L,
/// around the image of L. Signed mode needs codim(L) = 2.
RotationResult rotation_around_subspace(const Curve& c, const AffineSubspace& L, RotationMode mode);

}  // namespace rotlip
