#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "rotlip/types.hpp"

namespace rotlip {

/// Time-stamped polyline in R^dim. Points are stored column-wise.
///
/// A closed curve has its last sample snapped onto the first one at
/// construction, so every closed curve is an exact loop of segments.
class Curve {
 public:
  /// Relative tolerance (times the bounding-box diagonal) for closure.
  static constexpr Real kCloseTolerance = 1e-6L;

  Curve(std::vector<Real> times, Matrix points, bool closed = false);

  static Curve from_points(std::vector<Real> times, const std::vector<Vector>& points,
                           bool closed = false);

  [[nodiscard]] int dim() const { return static_cast<int>(points_.rows()); }
  [[nodiscard]] Eigen::Index size() const { return points_.cols(); }
  [[nodiscard]] Eigen::Index segment_count() const { return points_.cols() - 1; }

  [[nodiscard]] const std::vector<Real>& times() const { return times_; }
  [[nodiscard]] const Matrix& points() const { return points_; }
  [[nodiscard]] Real time(Eigen::Index i) const { return times_[static_cast<std::size_t>(i)]; }
  [[nodiscard]] auto point(Eigen::Index i) const { return points_.col(i); }

  [[nodiscard]] bool closed() const { return closed_; }
  [[nodiscard]] Real t_begin() const { return times_.front(); }
  [[nodiscard]] Real t_end() const { return times_.back(); }
  [[nodiscard]] Real duration() const { return t_end() - t_begin(); }

  /// Diagonal of the axis-aligned bounding box; an upper bound for the
  /// point-set diameter within a factor sqrt(dim).
  [[nodiscard]] Real diameter() const;

  /// True when the first and last samples coincide within kCloseTolerance.
  [[nodiscard]] bool endpoints_coincide() const;

  /// Same geometric curve traversed backwards; times are mirrored so they
  /// stay increasing.
  [[nodiscard]] Curve reversed() const;

  /// Point on the polyline at time t (clamped to the time range).
  [[nodiscard]] Vector sample_at(Real t) const;

 private:
  std::vector<Real> times_;
  Matrix points_;
  bool closed_ = false;
};

/// Points on the unit sphere S^{dim-1}.
class SphericalCurve {
 public:
  static constexpr Real kNormTolerance = 1e-9L;

  explicit SphericalCurve(Curve curve);

  [[nodiscard]] const Curve& curve() const { return curve_; }
  [[nodiscard]] int dim() const { return curve_.dim(); }

  /// Sum of great-circle arc angles between consecutive samples.
  [[nodiscard]] Real length() const;

 private:
  Curve curve_;
};

/// base + span(basis), with an orthonormal basis stored column-wise.
class AffineSubspace {
 public:
  static constexpr Real kOrthonormalTolerance = 1e-12L;

  AffineSubspace(Vector base, Matrix basis);

  static AffineSubspace point(Vector p);
  static AffineSubspace line(Vector base, const Vector& direction);
  /// Orthonormalizes the given spanning directions (Gram-Schmidt).
  static AffineSubspace spanned(Vector base, const std::vector<Vector>& directions);

  [[nodiscard]] int ambient_dim() const { return static_cast<int>(base_.size()); }
  [[nodiscard]] int dim() const { return static_cast<int>(basis_.cols()); }
  [[nodiscard]] int codim() const { return ambient_dim() - dim(); }

  [[nodiscard]] const Vector& base() const { return base_; }
  [[nodiscard]] const Matrix& basis() const { return basis_; }

  /// Orthonormal basis of the orthogonal complement, oriented so that
  /// [basis | complement] has determinant +1. Built from the standard axes
  /// in order, so L = Ox1 in R^3 gets (e2, e3).
  [[nodiscard]] const Matrix& complement_basis() const { return complement_; }

  [[nodiscard]] Vector closest_point(const Vector& x) const;
  [[nodiscard]] Real distance(const Vector& x) const;

 private:
  Vector base_;
  Matrix basis_;
  Matrix complement_;
};

enum class RotationConvention { absolute_radians, signed_turns, gauss_turns };

std::string_view convention_name(RotationConvention convention);

struct RotationResult {
  Real value = 0;
  Real error_estimate = 0;
  RotationConvention convention = RotationConvention::absolute_radians;
};

/// Sum of segment lengths, accumulated in sample order.
Real curve_length(const Curve& c);

/// Joins b after a. When b starts where a ends (same time and point) the
/// shared sample is kept once; otherwise b must start strictly later.
Curve concat(const Curve& a, const Curve& b);

/// Restriction to a time window, with interpolated end samples.
Curve clip(const Curve& c, TimeWindow window);

/// Unit-speed angular distance between the directions of u and v, accurate
/// for angles near 0 and near pi.
Real arc_angle(const Vector& u, const Vector& v);

/// Relative clearance a segment must keep from a blow-up center, measured
/// against the distance of its far endpoint.
inline constexpr Real kClearanceRatio = 1e-7L;

/// Throws DistanceTooSmall if a sample sits on `center`, or a segment passes
/// closer to it than kClearanceRatio times its far-end distance.
void require_clearance(const Curve& c, const Vector& center);

SphericalCurve spherical_blowup(const Curve& c, const Vector& center);

/// Orthogonal projection onto L^perp, expressed in the coordinates of
/// L.complement_basis() with L mapped to the origin.
Curve project_to_complement(const Curve& c, const AffineSubspace& L);

/// Arc-length-uniform resampling to n samples by linear interpolation.
Curve resample(const Curve& c, Eigen::Index n);

/// Closest distance from x to the segment [a, b].
Real point_segment_distance(const Vector& x, const Vector& a, const Vector& b);

}  // namespace rotlip
