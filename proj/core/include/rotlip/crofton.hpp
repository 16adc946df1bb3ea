#pragma once

#include <cstdint>
#include <string_view>

#include "rotlip/curve.hpp"

namespace rotlip {

/// c_n: Cauchy-Crofton constant for curves in R^n; V_n: area of the unit
/// sphere S^{n-1}; C_n = c_n * V_n.
struct CroftonConstants {
  int n = 0;
  Real c_n = 0;
  Real V_n = 0;
  Real C_n = 0;
};

CroftonConstants crofton_constants(int n);

struct LengthEstimate {
  Real value = 0;
  Real standard_error = 0;
  std::size_t draws = 0;
};

/// Spherical Cauchy-Crofton estimate: pi times the mean number of crossings
/// of the curve with a Haar-random great subsphere.
LengthEstimate crofton_length_estimate(const SphericalCurve& s, std::size_t m, std::uint64_t seed);

enum class WitnessRelation { coincide, antipodal };

std::string_view relation_name(WitnessRelation relation);

/// Pair of times at which the curve projects to the same point (or antipodal
/// points) of a circle or line, moving in opposite directions there.
/// For circles and equators `plane` holds two orthonormal columns; for the
/// Euclidean version it holds the single direction of the line.
struct EquatorWitness {
  Matrix plane;
  Real tau1 = 0;
  Real tau2 = 0;
  WitnessRelation relation = WitnessRelation::coincide;
  /// Signed velocity components along a common orientation of the tangent
  /// line (or of the line itself); opposite signs by construction.
  Real v_proj_1 = 0;
  Real v_proj_2 = 0;
  Real theta = 0;

  Real length = 0;            // s(t1, t2) of the input curve
  Real projected_length = 0;  // length of the projection that was searched
  Real t1 = 0;
  Real t2 = 0;
  Real threshold = 0;  // required lower bound for |v_proj_i|
  Real match_tolerance = 0;
  int trial = -1;  // -1: heuristic candidate, otherwise Haar draw index

  [[nodiscard]] bool satisfies(Real tol) const;
};

/// Curve in the plane on a circle centred at the origin.
EquatorWitness find_circle_witness(const Curve& c, Real theta);

/// Curve on the unit sphere. Tries the angular-momentum plane, the
/// second-moment plane, then `trials` Haar-random planes.
EquatorWitness find_equator_witness(const SphericalCurve& s, Real theta, int trials, std::uint64_t seed);

/// Curve in R^n. Tries the principal direction, then `trials` Haar-random
/// directions.
EquatorWitness find_euclidean_witness(const Curve& c, Real theta, int trials, std::uint64_t seed);

}  // namespace rotlip
