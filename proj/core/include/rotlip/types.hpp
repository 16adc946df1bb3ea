#pragma once

#include <initializer_list>
#include <numbers>

#include <Eigen/Dense>

namespace rotlip {

// Extended precision throughout: the twist-field example keeps orthogonal
// offsets of order exp(-1/x^2), which leave the double range near x = 0.037.
using Real = long double;

using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using Vector3 = Eigen::Matrix<Real, 3, 1>;
using Matrix3 = Eigen::Matrix<Real, 3, 3>;

inline constexpr Real kPi = std::numbers::pi_v<Real>;
inline constexpr Real kTwoPi = 2 * kPi;
inline constexpr Real kFourPi = 4 * kPi;

inline Vector make_vector(std::initializer_list<Real> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (Real x : values) v[i++] = x;
  return v;
}

/// Closed time interval [begin, end] used to clip trajectories.
struct TimeWindow {
  Real begin = 0;
  Real end = 0;

  [[nodiscard]] Real length() const { return end - begin; }
};

}  // namespace rotlip
