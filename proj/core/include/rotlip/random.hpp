#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "rotlip/types.hpp"

namespace rotlip {

using Rng = std::mt19937_64;

inline Vector gaussian_vector(Rng& rng, Eigen::Index n) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

inline Vector random_unit_vector(Rng& rng, Eigen::Index n) {
  Vector v;
  Real norm = 0;
  do {
    v = gaussian_vector(rng, n);
    norm = v.norm();
  } while (!(norm > 0));
  return v / norm;
}

inline Vector uniform_in_ball(Rng& rng, const Vector& center, Real radius) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto n = center.size();
  const Real r = radius * std::pow(static_cast<Real>(unit(rng)), 1 / static_cast<Real>(n));
  return center + r * random_unit_vector(rng, n);
}

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with the
/// signs of R's diagonal moved into Q).
inline Matrix haar_orthogonal(Rng& rng, Eigen::Index n) {
  Matrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) g.col(j) = gaussian_vector(rng, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return q;
}

}  // namespace rotlip
