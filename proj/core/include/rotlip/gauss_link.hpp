#pragma once

#include <utility>

#include "rotlip/curve.hpp"
#include "rotlip/rotation.hpp"

namespace rotlip {

/// Below this ratio of the larger diameter the two curves count as touching.
inline constexpr Real kCurvesClearance = 1e-7L;

/// Shortest distance between segments [a0, a1] and [b0, b1].
Real segment_distance(const Vector& a0, const Vector& a1, const Vector& b0, const Vector& b1);

/// Shortest distance between two polylines.
Real curve_distance(const Curve& c1, const Curve& c2);

/// Gauss integral (1/4pi) of <c1' x c2', c1 - c2> / |c1 - c2|^3 over both
/// parameter ranges, in turns. With this orientation a counter-clockwise
/// unit circle in the xy-plane and the upward z-axis give +1.
///
/// Segment pairs are integrated by the midpoint rule, bisecting the longer
/// segment while the pair is closer than 4 times its longer length (depth
/// cap 24). Ranges of segments that are that far apart and turn by at most
/// 0.02 rad are treated as single chords. The estimate is the run with every
/// segment (or chord) halved; the error is its difference from the unhalved
/// run, plus any pairs left at the depth cap, plus in absolute mode the
/// turning of merged ranges times their share of the integral.
RotationResult gauss_rotation_pair(const Curve& c1, const Curve& c2, RotationMode mode);

struct LinkingResult {
  Real raw = 0;
  long nearest_integer = 0;
  Real residual = 0;
  Real error_estimate = 0;
};

/// Signed Gauss integral of two closed curves snapped to an integer. Throws
/// QuadratureInconclusive when the residual is not below max(0.1, 3 * error).
LinkingResult linking_coefficient(const Curve& c1, const Curve& c2);

/// Signed count of the crossings of c2 through the flat region bounded by the
/// planar closed curve c1. Crossings in the direction of c1's normal (c1
/// counter-clockwise seen from the tip of the normal) count +1.
long topological_linking_planar(const Curve& c1, const Curve& c2);

struct LineCrosscheck {
  RotationResult gauss;       // against a truncated segment of the line
  RotationResult projection;  // signed rotation of c2 around the line
  Real truncation_tail = 0;   // bound on the Gauss contribution beyond +-M
  Real half_length = 0;
  Eigen::Index line_samples = 0;

  [[nodiscard]] Real discrepancy() const { return std::abs(gauss.value - projection.value); }
  [[nodiscard]] Real tolerance() const {
    return gauss.error_estimate + projection.error_estimate + truncation_tail;
  }
};

/// Polyline along `line` over [-M, M] around the foot of c2's centroid.
/// Spacing is 5% of the distance to c2 (or beyond c2's axial extent, the
/// distance from that extent), so the far ends are sampled geometrically.
Curve truncated_line(const AffineSubspace& line, const Curve& c2, Real half_length);

LineCrosscheck line_rotation_crosscheck(const Curve& c2, const AffineSubspace& line,
                                        Real half_length = 200);

}  // namespace rotlip
