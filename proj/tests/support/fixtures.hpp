#pragma once

#include <vector>

#include "oracles.hpp"
#include "rotlip/curve.hpp"
#include "rotlip/random.hpp"

namespace fixture {

using rotlip::Curve;
using rotlip::Matrix;
using rotlip::Real;
using rotlip::Vector;

inline std::vector<oracle::Vec3> points3(const Curve& c) {
  std::vector<oracle::Vec3> out;
  for (Eigen::Index i = 0; i < c.size(); ++i) out.emplace_back(c.point(i)(0), c.point(i)(1), c.point(i)(2));
  return out;
}

inline Curve polyline(const std::vector<std::vector<Real>>& pts) {
  std::vector<Real> t;
  std::vector<Vector> p;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    t.push_back(static_cast<Real>(i));
    Vector v(static_cast<Eigen::Index>(pts[i].size()));
    for (std::size_t d = 0; d < pts[i].size(); ++d) v[static_cast<Eigen::Index>(d)] = pts[i][d];
    p.push_back(v);
  }
  return Curve::from_points(std::move(t), p);
}

// Same samples, moved by x -> Q x + b.
inline Curve moved(const Curve& c, const Matrix& Q, const Vector& b) {
  Matrix p = (Q * c.points()).colwise() + b;
  return Curve(c.times(), std::move(p), c.closed());
}

inline Vector moved(const Vector& x, const Matrix& Q, const Vector& b) { return Q * x + b; }

}  // namespace fixture
