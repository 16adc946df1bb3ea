#include "rotlip/curve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rotlip/error.hpp"

namespace rotlip {

namespace {

Matrix orthonormal_complement(const Matrix& basis, int ambient) {
  const int k = static_cast<int>(basis.cols());
  Matrix frame(ambient, ambient);
  frame.leftCols(k) = basis;
  int filled = k;
  for (int axis = 0; axis < ambient && filled < ambient; ++axis) {
    Vector e = Vector::Unit(ambient, axis);
    // Two Gram-Schmidt passes keep the frame orthonormal to rounding.
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < filled; ++j) e -= frame.col(j).dot(e) * frame.col(j);
    }
    const Real n = e.norm();
    if (n < 1e-6L) continue;
    frame.col(filled++) = e / n;
  }
  if (filled != ambient) {
    throw Error(ErrorCode::InvalidArgument, "could not complete basis of the complement");
  }
  if (ambient > k && frame.determinant() < 0) frame.col(ambient - 1) *= -1;
  return frame.rightCols(ambient - k);
}

}  // namespace

Curve::Curve(std::vector<Real> times, Matrix points, bool closed)
    : times_(std::move(times)), points_(std::move(points)), closed_(closed) {
  if (points_.rows() < 1) throw Error(ErrorCode::InvalidCurve, "curve dimension must be positive");
  if (points_.cols() < 2) throw Error(ErrorCode::InvalidCurve, "a curve needs at least 2 samples");
  if (static_cast<Eigen::Index>(times_.size()) != points_.cols()) {
    throw Error(ErrorCode::InvalidCurve, "time and point counts differ");
  }
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i])) throw Error(ErrorCode::InvalidCurve, "non-finite time stamp");
    if (i > 0 && !(times_[i] > times_[i - 1])) {
      throw Error(ErrorCode::InvalidCurve,
                  "times must be strictly increasing (sample " + std::to_string(i) + ")");
    }
  }
  if (!points_.allFinite()) throw Error(ErrorCode::InvalidCurve, "non-finite coordinate");
  if (closed_) {
    if (!endpoints_coincide()) {
      throw Error(ErrorCode::InvalidCurve, "closed curve whose endpoints do not coincide");
    }
    points_.col(points_.cols() - 1) = points_.col(0);
  }
}

Curve Curve::from_points(std::vector<Real> times, const std::vector<Vector>& points, bool closed) {
  if (points.empty()) throw Error(ErrorCode::InvalidCurve, "a curve needs at least 2 samples");
  const auto dim = points.front().size();
  Matrix m(dim, static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != dim) throw Error(ErrorCode::DimensionMismatch, "mixed point dimensions");
    m.col(static_cast<Eigen::Index>(i)) = points[i];
  }
  return Curve(std::move(times), std::move(m), closed);
}

Real Curve::diameter() const {
  const Vector lo = points_.rowwise().minCoeff();
  const Vector hi = points_.rowwise().maxCoeff();
  return (hi - lo).norm();
}

bool Curve::endpoints_coincide() const {
  const Real gap = (points_.col(0) - points_.col(points_.cols() - 1)).norm();
  return gap <= kCloseTolerance * diameter();
}

Curve Curve::reversed() const {
  const Eigen::Index n = size();
  std::vector<Real> t(static_cast<std::size_t>(n));
  Matrix p(points_.rows(), n);
  const Real shift = t_begin() + t_end();
  for (Eigen::Index i = 0; i < n; ++i) {
    t[static_cast<std::size_t>(i)] = shift - times_[static_cast<std::size_t>(n - 1 - i)];
    p.col(i) = points_.col(n - 1 - i);
  }
  return Curve(std::move(t), std::move(p), closed_);
}

Vector Curve::sample_at(Real t) const {
  if (t <= t_begin()) return points_.col(0);
  if (t >= t_end()) return points_.col(size() - 1);
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const auto j = static_cast<Eigen::Index>(it - times_.begin());
  const Real t0 = times_[static_cast<std::size_t>(j - 1)];
  const Real t1 = times_[static_cast<std::size_t>(j)];
  const Real s = (t - t0) / (t1 - t0);
  return (1 - s) * points_.col(j - 1) + s * points_.col(j);
}

SphericalCurve::SphericalCurve(Curve curve) : curve_(std::move(curve)) {
  for (Eigen::Index i = 0; i < curve_.size(); ++i) {
    if (std::abs(curve_.point(i).norm() - 1) > kNormTolerance) {
      throw Error(ErrorCode::InvalidCurve, "sample " + std::to_string(i) + " is off the unit sphere");
    }
  }
}

Real SphericalCurve::length() const {
  Real total = 0;
  for (Eigen::Index i = 0; i < curve_.segment_count(); ++i) {
    total += arc_angle(curve_.point(i), curve_.point(i + 1));
  }
  return total;
}

AffineSubspace::AffineSubspace(Vector base, Matrix basis)
    : base_(std::move(base)), basis_(std::move(basis)) {
  if (base_.size() < 1) throw Error(ErrorCode::InvalidArgument, "empty base point");
  if (basis_.cols() > 0 && basis_.rows() != base_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "basis vectors do not match the base point dimension");
  }
  if (basis_.cols() == 0) basis_.resize(base_.size(), 0);
  if (basis_.cols() > base_.size()) throw Error(ErrorCode::InvalidArgument, "too many basis vectors");
  const Matrix gram = basis_.transpose() * basis_;
  const Matrix eye = Matrix::Identity(basis_.cols(), basis_.cols());
  if (basis_.cols() > 0 && (gram - eye).cwiseAbs().maxCoeff() > kOrthonormalTolerance) {
    throw Error(ErrorCode::InvalidArgument, "subspace basis is not orthonormal");
  }
  complement_ = orthonormal_complement(basis_, static_cast<int>(base_.size()));
}

AffineSubspace AffineSubspace::point(Vector p) {
  const auto n = p.size();
  return AffineSubspace(std::move(p), Matrix(n, 0));
}

AffineSubspace AffineSubspace::line(Vector base, const Vector& direction) {
  return spanned(std::move(base), {direction});
}

AffineSubspace AffineSubspace::spanned(Vector base, const std::vector<Vector>& directions) {
  Matrix basis(base.size(), static_cast<Eigen::Index>(directions.size()));
  Eigen::Index k = 0;
  for (const Vector& d : directions) {
    if (d.size() != base.size()) throw Error(ErrorCode::DimensionMismatch, "direction dimension");
    Vector e = d;
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index j = 0; j < k; ++j) e -= basis.col(j).dot(e) * basis.col(j);
    }
    const Real n = e.norm();
    if (!(n > 1e-12L * std::max<Real>(1, d.norm()))) {
      throw Error(ErrorCode::InvalidArgument, "spanning directions are degenerate");
    }
    basis.col(k++) = e / n;
  }
  return AffineSubspace(std::move(base), std::move(basis));
}

Vector AffineSubspace::closest_point(const Vector& x) const {
  if (x.size() != base_.size()) throw Error(ErrorCode::DimensionMismatch, "point dimension");
  return base_ + basis_ * (basis_.transpose() * (x - base_));
}

Real AffineSubspace::distance(const Vector& x) const { return (x - closest_point(x)).norm(); }

std::string_view convention_name(RotationConvention convention) {
  switch (convention) {
    case RotationConvention::absolute_radians: return "absolute_radians";
    case RotationConvention::signed_turns: return "signed_turns";
    case RotationConvention::gauss_turns: return "gauss_turns";
  }
  return "unknown";
}

Real curve_length(const Curve& c) {
  Real total = 0;
  for (Eigen::Index i = 0; i < c.segment_count(); ++i) {
    total += (c.point(i + 1) - c.point(i)).norm();
  }
  return total;
}

Curve concat(const Curve& a, const Curve& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "concatenating curves of different dimension");
  const bool shared = b.t_begin() == a.t_end();
  if (shared && (a.point(a.size() - 1) - b.point(0)).norm() > Curve::kCloseTolerance * a.diameter()) {
    throw Error(ErrorCode::InvalidCurve, "curves share a time stamp but not a point");
  }
  if (!shared && b.t_begin() < a.t_end()) {
    throw Error(ErrorCode::InvalidCurve, "second curve starts before the first one ends");
  }
  const Eigen::Index skip = shared ? 1 : 0;
  const Eigen::Index n = a.size() + b.size() - skip;
  std::vector<Real> t(a.times());
  t.insert(t.end(), b.times().begin() + skip, b.times().end());
  Matrix p(a.dim(), n);
  p.leftCols(a.size()) = a.points();
  p.rightCols(b.size() - skip) = b.points().rightCols(b.size() - skip);
  return Curve(std::move(t), std::move(p));
}

Curve clip(const Curve& c, TimeWindow window) {
  const Real lo = std::max(window.begin, c.t_begin());
  const Real hi = std::min(window.end, c.t_end());
  if (!(hi > lo)) throw Error(ErrorCode::InvalidArgument, "time window does not overlap the curve");
  std::vector<Real> t{lo};
  std::vector<Vector> pts{c.sample_at(lo)};
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (c.time(i) > lo && c.time(i) < hi) {
      t.push_back(c.time(i));
      pts.emplace_back(c.point(i));
    }
  }
  t.push_back(hi);
  pts.push_back(c.sample_at(hi));
  return Curve::from_points(std::move(t), pts);
}

Real arc_angle(const Vector& u, const Vector& v) {
  const Vector a = u / u.norm();
  const Vector b = v / v.norm();
  return 2 * std::atan2((a - b).norm(), (a + b).norm());
}

Real point_segment_distance(const Vector& x, const Vector& a, const Vector& b) {
  const Vector d = b - a;
  const Real dd = d.squaredNorm();
  Real s = dd > 0 ? (x - a).dot(d) / dd : 0;
  s = std::clamp<Real>(s, 0, 1);
  return (x - (a + s * d)).norm();
}

void require_clearance(const Curve& c, const Vector& center) {
  if (center.size() != c.dim()) throw Error(ErrorCode::DimensionMismatch, "center dimension does not match curve");
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    const Real r = (c.point(i) - center).norm();
    if (!(r > 0) || !std::isnormal(r)) {
      throw Error(ErrorCode::DistanceTooSmall, "sample " + std::to_string(i) + " coincides with the center");
    }
  }
  for (Eigen::Index i = 0; i < c.segment_count(); ++i) {
    const Vector a = c.point(i);
    const Vector b = c.point(i + 1);
    const Real far = std::max((a - center).norm(), (b - center).norm());
    if (point_segment_distance(center, a, b) <= kClearanceRatio * far) {
      throw Error(ErrorCode::DistanceTooSmall,
                  "segment " + std::to_string(i) + " passes through the center");
    }
  }
}

SphericalCurve spherical_blowup(const Curve& c, const Vector& center) {
  require_clearance(c, center);
  Matrix p(c.dim(), c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    const Vector d = c.point(i) - center;
    p.col(i) = d / d.norm();
  }
  return SphericalCurve(Curve(c.times(), std::move(p), c.closed()));
}

Curve project_to_complement(const Curve& c, const AffineSubspace& L) {
  if (L.ambient_dim() != c.dim()) throw Error(ErrorCode::DimensionMismatch, "subspace and curve dimensions differ");
  if (L.codim() < 1) throw Error(ErrorCode::CodimensionError, "subspace fills the ambient space");
  if (L.dim() == 0 && L.base().isZero(0)) return c;
  const Matrix& q = L.complement_basis();
  Matrix p = q.transpose() * (c.points().colwise() - L.base());
  return Curve(c.times(), std::move(p), c.closed());
}

Curve resample(const Curve& c, Eigen::Index n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "resample needs n >= 2");
  std::vector<Real> cumulative(static_cast<std::size_t>(c.size()), 0);
  for (Eigen::Index i = 1; i < c.size(); ++i) {
    cumulative[static_cast<std::size_t>(i)] =
        cumulative[static_cast<std::size_t>(i - 1)] + (c.point(i) - c.point(i - 1)).norm();
  }
  const Real total = cumulative.back();
  if (!(total > 0)) throw Error(ErrorCode::InvalidCurve, "cannot resample a curve of zero length");

  std::vector<Real> t(static_cast<std::size_t>(n));
  Matrix p(c.dim(), n);
  t.front() = c.t_begin();
  p.col(0) = c.point(0);
  t.back() = c.t_end();
  p.col(n - 1) = c.point(c.size() - 1);
  Eigen::Index j = 0;
  for (Eigen::Index k = 1; k + 1 < n; ++k) {
    const Real target = total * static_cast<Real>(k) / static_cast<Real>(n - 1);
    while (j + 1 < c.size() - 1 && cumulative[static_cast<std::size_t>(j + 1)] < target) ++j;
    const Real s0 = cumulative[static_cast<std::size_t>(j)];
    const Real s1 = cumulative[static_cast<std::size_t>(j + 1)];
    const Real lambda = s1 > s0 ? std::clamp<Real>((target - s0) / (s1 - s0), 0, 1) : 0;
    t[static_cast<std::size_t>(k)] = (1 - lambda) * c.time(j) + lambda * c.time(j + 1);
    p.col(k) = (1 - lambda) * c.point(j) + lambda * c.point(j + 1);
  }
  return Curve(std::move(t), std::move(p), c.closed());
}

}  // namespace rotlip
