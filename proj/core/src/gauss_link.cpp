#include "rotlip/gauss_link.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rotlip/error.hpp"

namespace rotlip {

namespace {

constexpr int kDepthCap = 24;
constexpr Real kLocality = 4;
constexpr Real kLineSpacing = 0.05L;
constexpr Real kPlanarTolerance = 1e-9L;
constexpr Real kTransversalTolerance = 1e-12L;
constexpr Real kFarTurning = 0.02L;

Real segment_distance3(const Vector3& p1, const Vector3& q1, const Vector3& p2, const Vector3& q2) {
  const Vector3 d1 = q1 - p1;
  const Vector3 d2 = q2 - p2;
  const Vector3 r = p1 - p2;
  const Real a = d1.squaredNorm();
  const Real e = d2.squaredNorm();
  const Real f = d2.dot(r);
  Real s = 0;
  Real t = 0;
  if (a <= 0 && e <= 0) return r.norm();
  if (a <= 0) {
    t = std::clamp<Real>(f / e, 0, 1);
  } else {
    const Real c = d1.dot(r);
    if (e <= 0) {
      s = std::clamp<Real>(-c / a, 0, 1);
    } else {
      const Real b = d1.dot(d2);
      const Real denom = a * e - b * b;
      s = denom > 0 ? std::clamp<Real>((b * f - c * e) / denom, 0, 1) : 0;
      t = (b * s + f) / e;
      if (t < 0) {
        t = 0;
        s = std::clamp<Real>(-c / a, 0, 1);
      } else if (t > 1) {
        t = 1;
        s = std::clamp<Real>((b - c) / a, 0, 1);
      }
    }
  }
  return (p1 + s * d1 - (p2 + t * d2)).norm();
}

struct PairIntegrator {
  bool absolute;
  Real capped_error = 0;

  Real operator()(const Vector3& a0, const Vector3& a1, const Vector3& b0, const Vector3& b1,
                  int depth) {
    const Vector3 da = a1 - a0;
    const Vector3 db = b1 - b0;
    const Real la = da.norm();
    const Real lb = db.norm();
    const Real lmax = std::max(la, lb);
    if (!(lmax > 0)) return 0;
    const Vector3 m = (a0 + a1) / 2 - (b0 + b1) / 2;
    const Real dm = m.norm();

    bool close = false;
    if (dm - (la + lb) / 2 < kLocality * lmax) {
      close = segment_distance3(a0, a1, b0, b1) < kLocality * lmax;
    }
    if (close && depth < kDepthCap) {
      if (la >= lb) {
        const Vector3 mid = (a0 + a1) / 2;
        return (*this)(a0, mid, b0, b1, depth + 1) + (*this)(mid, a1, b0, b1, depth + 1);
      }
      const Vector3 mid = (b0 + b1) / 2;
      return (*this)(a0, a1, b0, mid, depth + 1) + (*this)(a0, a1, mid, b1, depth + 1);
    }
    Real value = da.cross(db).dot(m) / (dm * dm * dm);
    if (absolute) value = std::abs(value);
    if (close) capped_error += std::abs(value);
    return value;
  }
};

// Binary tree over index ranges of polyline segments. Far apart, nearly
// straight ranges are integrated as single chords.
struct Node {
  std::size_t lo = 0;
  std::size_t hi = 0;
  int left = -1;
  int right = -1;
  Vector3 center = Vector3::Zero();
  Real radius = 0;
  Real length = 0;
  Real turning = 0;

  [[nodiscard]] bool leaf() const { return hi - lo == 1; }
};

struct SegmentTree {
  std::vector<Node> nodes;
  const std::vector<Vector3>& pts;
  std::vector<Real> cum_length;
  std::vector<Real> cum_turning;

  explicit SegmentTree(const std::vector<Vector3>& p) : pts(p) {
    const std::size_t n = p.size();
    cum_length.assign(n, 0);
    cum_turning.assign(n, 0);
    for (std::size_t i = 1; i < n; ++i) cum_length[i] = cum_length[i - 1] + (p[i] - p[i - 1]).norm();
    // cum_turning[i] sums the exterior angles at vertices 1..i.
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const Vector3 u = p[i] - p[i - 1];
      const Vector3 v = p[i + 1] - p[i];
      cum_turning[i] = cum_turning[i - 1] + std::atan2(u.cross(v).norm(), u.dot(v));
    }
    if (n >= 2) cum_turning[n - 1] = cum_turning[n - 2];
    nodes.reserve(2 * n);
    if (n >= 2) build(0, n - 1);
  }

  int build(std::size_t lo, std::size_t hi) {
    const int id = static_cast<int>(nodes.size());
    nodes.emplace_back();
    Node node;
    node.lo = lo;
    node.hi = hi;
    Vector3 mn = pts[lo];
    Vector3 mx = pts[lo];
    for (std::size_t i = lo + 1; i <= hi; ++i) {
      mn = mn.cwiseMin(pts[i]);
      mx = mx.cwiseMax(pts[i]);
    }
    node.center = (mn + mx) / 2;
    node.radius = (mx - mn).norm() / 2;
    node.length = cum_length[hi] - cum_length[lo];
    node.turning = hi - lo > 1 ? cum_turning[hi - 1] - cum_turning[lo] : 0;
    if (hi - lo > 1) {
      const std::size_t mid = lo + (hi - lo) / 2;
      node.left = build(lo, mid);
      node.right = build(mid, hi);
    }
    nodes[static_cast<std::size_t>(id)] = node;
    return id;
  }

  // Vertex halving a range, or the midpoint of a single segment.
  [[nodiscard]] Vector3 split_point(const Node& n) const {
    if (n.leaf()) return (pts[n.lo] + pts[n.hi]) / 2;
    return pts[n.lo + (n.hi - n.lo) / 2];
  }
};

struct Accumulator {
  Real value = 0;
  Real error = 0;

  // Midpoint rule on the pair of chords, and on the four pairs of half
  // chords; the finer sum is kept.
  void add_far(PairIntegrator& f, const Vector3& a0, const Vector3& a1, const Vector3& am, const Vector3& b0,
               const Vector3& b1, const Vector3& bm, Real bend) {
    const Real base = f(a0, a1, b0, b1, kDepthCap);
    const Real parts[4] = {f(a0, am, b0, bm, kDepthCap), f(a0, am, bm, b1, kDepthCap),
                           f(am, a1, b0, bm, kDepthCap), f(am, a1, bm, b1, kDepthCap)};
    const Real refined = parts[0] + parts[1] + parts[2] + parts[3];
    value += refined;
    error += std::abs(refined - base);
    if (f.absolute) {
      // Summing signed chords before taking the modulus loses cancellation
      // inside the ranges; bound it by the turning of both ranges.
      error += bend;
    }
  }

  void add_near(PairIntegrator& f, const Vector3& a0, const Vector3& a1, const Vector3& b0, const Vector3& b1) {
    const Vector3 am = (a0 + a1) / 2;
    const Vector3 bm = (b0 + b1) / 2;
    const Real base = f(a0, a1, b0, b1, 0);
    const Real refined = f(a0, am, b0, bm, 0) + f(a0, am, bm, b1, 0) + f(am, a1, b0, bm, 0) + f(am, a1, bm, b1, 0);
    value += refined;
    error += std::abs(refined - base);
  }
};

// Throws CurvesTooClose when some pair of segments nearly touches.
void require_separation(const SegmentTree& tp, const SegmentTree& tq, Real threshold) {
  std::vector<std::pair<int, int>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [ia, ib] = stack.back();
    stack.pop_back();
    const Node& a = tp.nodes[static_cast<std::size_t>(ia)];
    const Node& b = tq.nodes[static_cast<std::size_t>(ib)];
    if ((a.center - b.center).norm() - a.radius - b.radius > threshold) continue;
    if (a.leaf() && b.leaf()) {
      const Real d = segment_distance3(tp.pts[a.lo], tp.pts[a.hi], tq.pts[b.lo], tq.pts[b.hi]);
      if (d <= threshold) {
        throw Error(ErrorCode::CurvesTooClose, "segments " + std::to_string(a.lo) + " and " + std::to_string(b.lo) +
                                                   " are " + std::to_string(static_cast<double>(d)) + " apart");
      }
      continue;
    }
    if (!a.leaf() && (b.leaf() || a.radius >= b.radius)) {
      stack.emplace_back(a.left, ib);
      stack.emplace_back(a.right, ib);
    } else {
      stack.emplace_back(ia, b.left);
      stack.emplace_back(ia, b.right);
    }
  }
}

std::vector<Vector3> points3(const Curve& c) {
  std::vector<Vector3> out(static_cast<std::size_t>(c.size()));
  for (Eigen::Index i = 0; i < c.size(); ++i) out[static_cast<std::size_t>(i)] = c.point(i);
  return out;
}

void require_dim3(const Curve& c) {
  if (c.dim() != 3) throw Error(ErrorCode::DimensionMismatch, "Gauss integral needs curves in 3-space");
}

}  // namespace

Real segment_distance(const Vector& a0, const Vector& a1, const Vector& b0, const Vector& b1) {
  if (a0.size() != 3 || a1.size() != 3 || b0.size() != 3 || b1.size() != 3) {
    throw Error(ErrorCode::DimensionMismatch, "segment distance is implemented in 3-space");
  }
  return segment_distance3(a0, a1, b0, b1);
}

Real curve_distance(const Curve& c1, const Curve& c2) {
  require_dim3(c1);
  require_dim3(c2);
  const auto p = points3(c1);
  const auto q = points3(c2);
  const SegmentTree tp(p);
  const SegmentTree tq(q);
  Real best = std::numeric_limits<Real>::infinity();
  std::vector<std::pair<int, int>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [ia, ib] = stack.back();
    stack.pop_back();
    const Node& a = tp.nodes[static_cast<std::size_t>(ia)];
    const Node& b = tq.nodes[static_cast<std::size_t>(ib)];
    if ((a.center - b.center).norm() - a.radius - b.radius >= best) continue;
    if (a.leaf() && b.leaf()) {
      best = std::min(best, segment_distance3(p[a.lo], p[a.hi], q[b.lo], q[b.hi]));
    } else if (!a.leaf() && (b.leaf() || a.radius >= b.radius)) {
      stack.emplace_back(a.left, ib);
      stack.emplace_back(a.right, ib);
    } else {
      stack.emplace_back(ia, b.left);
      stack.emplace_back(ia, b.right);
    }
  }
  return best;
}

RotationResult gauss_rotation_pair(const Curve& c1, const Curve& c2, RotationMode mode) {
  require_dim3(c1);
  require_dim3(c2);
  const auto p = points3(c1);
  const auto q = points3(c2);
  const SegmentTree tp(p);
  const SegmentTree tq(q);
  require_separation(tp, tq, kCurvesClearance * std::max(c1.diameter(), c2.diameter()));
  PairIntegrator integrate{mode == RotationMode::absolute};
  Accumulator acc;
  std::vector<std::pair<int, int>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [ia, ib] = stack.back();
    stack.pop_back();
    const Node& a = tp.nodes[static_cast<std::size_t>(ia)];
    const Node& b = tq.nodes[static_cast<std::size_t>(ib)];
    const Real gap = (a.center - b.center).norm() - a.radius - b.radius;
    const bool far = gap > kLocality * std::max(a.length, b.length);
    if (far && a.turning <= kFarTurning && b.turning <= kFarTurning) {
      acc.add_far(integrate, p[a.lo], p[a.hi], tp.split_point(a), q[b.lo], q[b.hi], tq.split_point(b),
                  (a.turning + b.turning) * a.length * b.length / (gap * gap));
      continue;
    }
    if (a.leaf() && b.leaf()) {
      acc.add_near(integrate, p[a.lo], p[a.hi], q[b.lo], q[b.hi]);
      continue;
    }
    if (!a.leaf() && (b.leaf() || a.length >= b.length)) {
      stack.emplace_back(a.left, ib);
      stack.emplace_back(a.right, ib);
    } else {
      stack.emplace_back(ia, b.left);
      stack.emplace_back(ia, b.right);
    }
  }
  const Real error = acc.error + integrate.capped_error;
  return {acc.value / kFourPi, error / kFourPi, RotationConvention::gauss_turns};
}

LinkingResult linking_coefficient(const Curve& c1, const Curve& c2) {
  if (!c1.closed() || !c2.closed()) throw Error(ErrorCode::NotClosed, "linking coefficient needs two closed curves");
  const RotationResult g = gauss_rotation_pair(c1, c2, RotationMode::signed_);
  LinkingResult out;
  out.raw = g.value;
  out.error_estimate = g.error_estimate;
  out.nearest_integer = std::lround(g.value);
  out.residual = std::abs(g.value - static_cast<Real>(out.nearest_integer));
  const Real threshold = std::max<Real>(0.1L, 3 * g.error_estimate);
  if (!(out.residual < threshold)) {
    throw Error(ErrorCode::QuadratureInconclusive,
                "Gauss integral " + std::to_string(static_cast<double>(g.value)) +
                    " is not within " + std::to_string(static_cast<double>(threshold)) +
                    " of an integer");
  }
  return out;
}

long topological_linking_planar(const Curve& c1, const Curve& c2) {
  require_dim3(c1);
  require_dim3(c2);
  if (!c1.closed()) throw Error(ErrorCode::NotClosed, "the spanning curve must be closed");

  const Vector3 centroid = c1.points().rowwise().mean();
  Vector3 normal = Vector3::Zero();
  for (Eigen::Index i = 0; i < c1.segment_count(); ++i) {
    const Vector3 a = Vector3(c1.point(i)) - centroid;
    const Vector3 b = Vector3(c1.point(i + 1)) - centroid;
    normal += a.cross(b);
  }
  if (!(normal.norm() > 0)) throw Error(ErrorCode::NotPlanar, "the spanning curve encloses no area");
  normal.normalize();

  const Real scale = std::max(c1.diameter(), c2.diameter());
  for (Eigen::Index i = 0; i < c1.size(); ++i) {
    if (std::abs(normal.dot(Vector3(c1.point(i)) - centroid)) > kPlanarTolerance * c1.diameter()) {
      throw Error(ErrorCode::NotPlanar, "sample " + std::to_string(i) + " leaves the plane of the spanning curve");
    }
  }

  // In-plane frame (u, v) with u x v = normal.
  const int axis = std::abs(normal.x()) < 0.6L ? 0 : 1;
  Vector3 u = Vector3::Unit(axis);
  u = (u - u.dot(normal) * normal).normalized();
  const Vector3 v = normal.cross(u);

  Matrix poly(2, c1.size());
  for (Eigen::Index i = 0; i < c1.size(); ++i) {
    const Vector3 d = Vector3(c1.point(i)) - centroid;
    poly(0, i) = d.dot(u);
    poly(1, i) = d.dot(v);
  }
  auto winding = [&](Real x, Real y) {
    Real total = 0;
    for (Eigen::Index i = 0; i + 1 < poly.cols(); ++i) {
      const Real ax = poly(0, i) - x, ay = poly(1, i) - y;
      const Real bx = poly(0, i + 1) - x, by = poly(1, i + 1) - y;
      total += std::atan2(ax * by - ay * bx, ax * bx + ay * by);
    }
    return std::lround(total / kTwoPi);
  };

  std::vector<Real> h(static_cast<std::size_t>(c2.size()));
  for (Eigen::Index j = 0; j < c2.size(); ++j) {
    h[static_cast<std::size_t>(j)] = normal.dot(Vector3(c2.point(j)) - centroid);
    if (std::abs(h[static_cast<std::size_t>(j)]) <= kTransversalTolerance * scale) {
      throw Error(ErrorCode::NonTransversal, "sample " + std::to_string(j) + " of the second curve lies in the plane");
    }
  }

  long count = 0;
  for (Eigen::Index j = 0; j < c2.segment_count(); ++j) {
    const Real h0 = h[static_cast<std::size_t>(j)];
    const Real h1 = h[static_cast<std::size_t>(j + 1)];
    if ((h0 > 0) == (h1 > 0)) continue;
    const Real lambda = h0 / (h0 - h1);
    const Vector3 x = (1 - lambda) * Vector3(c2.point(j)) + lambda * Vector3(c2.point(j + 1)) - centroid;
    const long w = winding(x.dot(u), x.dot(v));
    count += (h1 > h0 ? 1 : -1) * w;
  }
  return count;
}

Curve truncated_line(const AffineSubspace& line, const Curve& c2, Real half_length) {
  if (line.ambient_dim() != 3 || line.dim() != 1) {
    throw Error(ErrorCode::CodimensionError, "expected a straight line in 3-space");
  }
  require_dim3(c2);
  if (!(half_length > 0)) throw Error(ErrorCode::InvalidArgument, "truncation half-length must be positive");
  const Vector d = line.basis().col(0);
  const Vector centroid = c2.points().rowwise().mean();
  const Real z0 = d.dot(centroid - line.base());

  Real zmin = std::numeric_limits<Real>::infinity();
  Real zmax = -zmin;
  Real rho_min = zmin;
  for (Eigen::Index i = 0; i < c2.size(); ++i) {
    const Vector x = c2.point(i);
    const Real z = d.dot(x - line.base());
    zmin = std::min(zmin, z);
    zmax = std::max(zmax, z);
    rho_min = std::min(rho_min, line.distance(x));
  }
  if (!(rho_min > 0)) throw Error(ErrorCode::DistanceTooSmall, "the curve meets the line");

  std::vector<Real> zs;
  Real z = z0 - half_length;
  const Real end = z0 + half_length;
  while (z < end) {
    zs.push_back(z);
    const Real beyond = std::max<Real>({0, zmin - z, z - zmax});
    z += kLineSpacing * std::max(rho_min, beyond);
  }
  zs.push_back(end);

  Matrix pts(3, static_cast<Eigen::Index>(zs.size()));
  for (std::size_t i = 0; i < zs.size(); ++i) pts.col(static_cast<Eigen::Index>(i)) = line.base() + zs[i] * d;
  return Curve(std::move(zs), std::move(pts));
}

LineCrosscheck line_rotation_crosscheck(const Curve& c2, const AffineSubspace& line, Real half_length) {
  const Curve segment = truncated_line(line, c2, half_length);
  LineCrosscheck out;
  out.half_length = half_length;
  out.line_samples = segment.size();
  out.gauss = gauss_rotation_pair(segment, c2, RotationMode::signed_);
  out.projection = rotation_around_subspace(c2, line, RotationMode::signed_);

  const RotationResult total = rotation_around_subspace(c2, line, RotationMode::absolute);
  const Vector d = line.basis().col(0);
  const Real z0 = d.dot(segment.sample_at((segment.t_begin() + segment.t_end()) / 2) - line.base());
  Real missing = 0;
  for (Eigen::Index i = 0; i < c2.size(); ++i) {
    const Vector x = c2.point(i);
    const Real z = d.dot(x - line.base()) - z0;
    const Real rho = line.distance(x);
    auto side = [rho](Real gap) { return (1 - gap / std::hypot(rho, gap)) / 2; };
    missing = std::max(missing, side(half_length - z) + side(half_length + z));
  }
  out.truncation_tail = (total.value + total.error_estimate) / kTwoPi * missing;
  return out;
}

}  // namespace rotlip
