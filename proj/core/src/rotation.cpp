#include "rotlip/rotation.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rotlip/error.hpp"

namespace rotlip {

namespace {

constexpr Real kEps = std::numeric_limits<Real>::epsilon();

template <class Increment>
RotationResult accumulate(const Curve& c, Increment increment, RotationConvention convention,
                          Real unit) {
  const Eigen::Index n = c.size();
  Real fine = 0;
  Real magnitude = 0;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const Real d = increment(i, i + 1);
    fine += d;
    magnitude += std::abs(d);
  }
  Real coarse = 0;
  Eigen::Index i = 0;
  for (; i + 2 < n; i += 2) coarse += increment(i, i + 2);
  if (i + 1 < n) coarse += increment(i, n - 1);

  const Real rounding = 64 * kEps * static_cast<Real>(n) * (magnitude + 1);
  return {fine / unit, (std::abs(fine - coarse) + rounding) / unit, convention};
}

}  // namespace

std::string_view mode_name(RotationMode mode) {
  return mode == RotationMode::absolute ? "abs" : "signed";
}

RotationMode parse_mode(std::string_view text) {
  if (text == "abs" || text == "absolute") return RotationMode::absolute;
  if (text == "signed") return RotationMode::signed_;
  throw Error(ErrorCode::ParseError, "mode must be abs or signed, got '" + std::string(text) + "'");
}

RotationResult absolute_rotation_point(const Curve& c, const Vector& x0) {
  require_clearance(c, x0);
  const Matrix d = c.points().colwise() - x0;
  auto increment = [&](Eigen::Index a, Eigen::Index b) {
    return arc_angle(d.col(a), d.col(b));
  };
  return accumulate(c, increment, RotationConvention::absolute_radians, 1);
}

RotationResult signed_winding_plane(const Curve& c, const Vector& x0) {
  if (c.dim() != 2 || x0.size() != 2) {
    throw Error(ErrorCode::DimensionMismatch, "signed winding needs a planar curve and point");
  }
  require_clearance(c, x0);
  const Matrix d = c.points().colwise() - x0;
  auto increment = [&](Eigen::Index a, Eigen::Index b) {
    const Real cross = d(0, a) * d(1, b) - d(1, a) * d(0, b);
    const Real dot = d(0, a) * d(0, b) + d(1, a) * d(1, b);
    return std::atan2(cross, dot);
  };
  return accumulate(c, increment, RotationConvention::signed_turns, kTwoPi);
}

RotationResult rotation_around_subspace(const Curve& c, const AffineSubspace& L, RotationMode mode) {
  if (L.ambient_dim() != c.dim()) throw Error(ErrorCode::DimensionMismatch, "subspace and curve dimensions differ");
  if (mode == RotationMode::signed_ && L.codim() != 2) {
    throw Error(ErrorCode::CodimensionError,
                "signed rotation needs codimension 2, got " + std::to_string(L.codim()));
  }
  if (L.codim() < 2) {
    throw Error(ErrorCode::CodimensionError, "rotation around a subspace needs codimension >= 2");
  }
  const Curve projected = project_to_complement(c, L);
  const Vector origin = Vector::Zero(projected.dim());
  if (mode == RotationMode::signed_) return signed_winding_plane(projected, origin);
  return absolute_rotation_point(projected, origin);
}

}  // namespace rotlip
