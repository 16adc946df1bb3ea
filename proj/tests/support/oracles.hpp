#pragma once

// Reference computations that share no code with the library.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using Real = long double;
using Vec3 = Eigen::Matrix<Real, 3, 1>;
using MatX = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using VecX = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

inline constexpr Real kPi = 3.141592653589793238462643383279502884L;

// Solid angle of the closed polygon `loop` seen from p (Van Oosterom and
// Strackee, fanned from the first vertex).
inline Real solid_angle(const std::vector<Vec3>& loop, const Vec3& p) {
  Real total = 0;
  const Vec3 a = loop[0] - p;
  const Real na = a.norm();
  for (std::size_t i = 1; i + 1 < loop.size(); ++i) {
    const Vec3 b = loop[i] - p;
    const Vec3 c = loop[i + 1] - p;
    const Real nb = b.norm();
    const Real nc = c.norm();
    const Real det = a.dot(b.cross(c));
    const Real den = na * nb * nc + a.dot(b) * nc + a.dot(c) * nb + b.dot(c) * na;
    total += 2 * std::atan2(det, den);
  }
  return total;
}

// Gauss integral of a closed polygon and a polyline: the change of the solid
// angle along the polyline over 4 pi, unwrapped step by step. Exact for the
// polylines themselves when each step changes the solid angle by < 2 pi.
inline Real gauss_by_solid_angle(const std::vector<Vec3>& loop, const std::vector<Vec3>& path) {
  Real total = 0;
  Real prev = solid_angle(loop, path[0]);
  for (std::size_t j = 1; j < path.size(); ++j) {
    const Real cur = solid_angle(loop, path[j]);
    Real d = cur - prev;
    while (d > 2 * kPi) d -= 4 * kPi;
    while (d < -2 * kPi) d += 4 * kPi;
    total += d;
    prev = cur;
  }
  return total / (4 * kPi);
}

// Gauss integral of the unit circle with the axis segment [-M, M].
inline Real circle_axis_gauss(Real M) { return M / std::sqrt(1 + M * M); }

// exp(A) by scaling and squaring of a Taylor series.
inline MatX expm(const MatX& A) {
  const Real norm = A.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  Real scale = 1;
  while (norm * scale > 0.125L) {
    scale /= 2;
    ++squarings;
  }
  const MatX B = A * scale;
  MatX term = MatX::Identity(A.rows(), A.cols());
  MatX sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * B / static_cast<Real>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

// Largest difference quotient over n random pairs in a ball.
inline Real brute_lipschitz(const std::function<VecX(const VecX&)>& v, const VecX& center, Real radius,
                            std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0, 1);
  const auto dim = center.size();
  auto draw = [&] {
    VecX d(dim);
    for (Eigen::Index i = 0; i < dim; ++i) d[i] = g(rng);
    d.normalize();
    return VecX(center + radius * std::pow(static_cast<Real>(u(rng)), 1.0L / static_cast<Real>(dim)) * d);
  };
  Real best = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const VecX x = draw();
    const VecX y = draw();
    const Real dx = (x - y).norm();
    if (dx > 0) best = std::max(best, (v(x) - v(y)).norm() / dx);
  }
  return best;
}

// Helix (cos t, sin t, c t) winds once per 2 pi around the z-axis.
inline Real helix_turns(Real t_end) { return t_end / (2 * kPi); }

}  // namespace oracle
