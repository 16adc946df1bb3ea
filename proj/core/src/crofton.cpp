#include "rotlip/crofton.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "rotlip/error.hpp"
#include "rotlip/random.hpp"

namespace rotlip {

namespace {

constexpr Real kRelax = 4;
constexpr Real kProjectionShare = 0.99L;
constexpr Real kCircleTolerance = 1e-6L;
constexpr Real kBoundSlack = 1e-9L;

struct Track {
  std::vector<Real> t;
  std::vector<Real> key;       // longitude mod pi, or position on the line
  std::vector<Real> velocity;  // signed along a fixed orientation of the tangent line
  std::vector<int> parity;     // floor(phi / pi) mod 2 for angular tracks
};

struct Match {
  std::size_t i = 0;
  std::size_t j = 0;
  Real score = -1;
};

// Best pair of interior samples whose keys agree within tol and whose
// velocities have opposite signs, ranked by the smaller speed. With a
// period, keys wrap around and the velocity orientation flips across it.
Match best_opposite_pair(const Track& tr, Real tol, Real period) {
  const std::size_t n = tr.t.size();
  struct Entry {
    Real key;
    Real v;
    std::size_t idx;
  };
  std::vector<Entry> entries;
  entries.reserve(n);
  for (std::size_t i = 1; i + 1 < n; ++i) entries.push_back({tr.key[i], tr.velocity[i], i});
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.key < b.key || (a.key == b.key && a.idx < b.idx);
  });
  if (period > 0) {
    const std::size_t base = entries.size();
    for (std::size_t k = 0; k < base && entries[k].key < tol; ++k) {
      entries.push_back({entries[k].key + period, -entries[k].v, entries[k].idx});
    }
  }
  Match best;
  for (std::size_t a = 0; a < entries.size(); ++a) {
    const Entry& ea = entries[a];
    if (ea.v == 0) continue;
    for (std::size_t b = a + 1; b < entries.size() && entries[b].key - ea.key <= tol; ++b) {
      const Entry& eb = entries[b];
      if (eb.idx == ea.idx || (ea.v > 0) == (eb.v > 0) || eb.v == 0) continue;
      const Real score = std::min(std::abs(ea.v), std::abs(eb.v));
      const std::size_t i = std::min(ea.idx, eb.idx);
      const std::size_t j = std::max(ea.idx, eb.idx);
      if (score > best.score || (score == best.score && (i < best.i || (i == best.i && j < best.j)))) {
        best = {i, j, score};
      }
    }
  }
  return best;
}

std::vector<Real> centered_rate(const std::vector<Real>& t, const std::vector<Real>& y) {
  const std::size_t n = t.size();
  std::vector<Real> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
    r[i] = (y[hi] - y[lo]) / (t[hi] - t[lo]);
  }
  return r;
}

// Angular track of a curve projected to the circle spanned by (e1, e2):
// unwrapped longitude, and the velocity's component along the tangent to
// that circle, oriented by the longitude mod pi.
struct AngularProjection {
  Track track;
  Real projected_length = 0;
};

std::optional<AngularProjection> project_angular(const Curve& c, const Vector& e1, const Vector& e2,
                                                 bool use_longitude_rate, Real radius) {
  const auto n = static_cast<std::size_t>(c.size());
  std::vector<Real> phi(n);
  std::vector<Real> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = c.point(static_cast<Eigen::Index>(i));
    x[i] = e1.dot(p);
    y[i] = e2.dot(p);
    if (!(std::hypot(x[i], y[i]) > 0)) return std::nullopt;  // sample at a pole of this circle
  }
  AngularProjection out;
  phi[0] = std::atan2(y[0], x[0]);
  for (std::size_t i = 1; i < n; ++i) {
    const Real d = std::atan2(x[i - 1] * y[i] - y[i - 1] * x[i], x[i - 1] * x[i] + y[i - 1] * y[i]);
    phi[i] = phi[i - 1] + d;
    out.projected_length += radius * std::abs(d);
  }
  Track& tr = out.track;
  tr.t = c.times();
  tr.key.resize(n);
  tr.parity.resize(n);
  tr.velocity.resize(n);
  std::vector<Real> rate;
  if (use_longitude_rate) {
    rate = centered_rate(tr.t, phi);
  } else {
    const std::vector<Real> vx = centered_rate(tr.t, x);
    const std::vector<Real> vy = centered_rate(tr.t, y);
    rate.resize(n);
    // Tangent T(phi) = (-sin phi, cos phi) in the (e1, e2) frame.
    for (std::size_t i = 0; i < n; ++i) rate[i] = -std::sin(phi[i]) * vx[i] + std::cos(phi[i]) * vy[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Real k = std::floor(phi[i] / kPi);
    tr.key[i] = phi[i] - k * kPi;
    tr.parity[i] = static_cast<int>(std::fmod(std::abs(k), 2));
    const Real speed = use_longitude_rate ? radius * rate[i] : rate[i];
    tr.velocity[i] = tr.parity[i] == 0 ? speed : -speed;
  }
  return out;
}

EquatorWitness make_witness(const Track& tr, const Match& m, Matrix plane, Real theta, bool angular) {
  EquatorWitness w;
  w.plane = std::move(plane);
  w.tau1 = tr.t[m.i];
  w.tau2 = tr.t[m.j];
  w.v_proj_1 = tr.velocity[m.i];
  w.v_proj_2 = tr.velocity[m.j];
  w.theta = theta;
  w.t1 = tr.t.front();
  w.t2 = tr.t.back();
  w.relation = angular && tr.parity[m.i] != tr.parity[m.j] ? WitnessRelation::antipodal : WitnessRelation::coincide;
  return w;
}

// Runs the search at tolerance tol and once more at 4 * tol.
std::optional<EquatorWitness> search(const Track& tr, Real tol, Real period, Real threshold,
                                     const Matrix& plane, Real theta, bool angular) {
  for (int attempt = 0; attempt < 2; ++attempt) {
    const Real match_tol = attempt == 0 ? tol : kRelax * tol;
    const Match m = best_opposite_pair(tr, match_tol, period);
    if (m.score >= threshold * (1 - kBoundSlack)) {
      EquatorWitness w = make_witness(tr, m, plane, theta, angular);
      w.match_tolerance = match_tol;
      return w;
    }
  }
  return std::nullopt;
}

Real open_factor(Real theta, Real margin) { return (theta - margin) / (4 * theta); }

Matrix top_eigenvectors(const Matrix& sym, int k) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  const auto n = sym.rows();
  Matrix out(n, k);
  for (int j = 0; j < k; ++j) out.col(j) = eig.eigenvectors().col(n - 1 - j);
  return out;
}

void check_returned(const EquatorWitness& w) {
  if (!w.satisfies(kBoundSlack * w.threshold)) {
    throw Error(ErrorCode::WitnessNotFound, "internal: witness fails its own inequality");
  }
}

}  // namespace

CroftonConstants crofton_constants(int n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "Crofton constants need n >= 2");
  const Real half = std::sqrt(kPi);  // Gamma(1/2)
  const Real gn2 = std::tgamma(static_cast<Real>(n) / 2);
  CroftonConstants k;
  k.n = n;
  k.c_n = std::tgamma(static_cast<Real>(n + 1) / 2) * half / gn2;
  k.V_n = 2 * std::pow(half, static_cast<Real>(n)) / gn2;
  k.C_n = k.c_n * k.V_n;
  return k;
}

LengthEstimate crofton_length_estimate(const SphericalCurve& s, std::size_t m, std::uint64_t seed) {
  if (m < 100) throw Error(ErrorCode::InvalidArgument, "Crofton estimate needs m >= 100 draws");
  const Curve& c = s.curve();
  const int n = c.dim();
  Rng rng(seed);
  Real sum = 0;
  Real sum_sq = 0;
  for (std::size_t k = 0; k < m; ++k) {
    // The rotated subsphere is the unit sphere of the hyperplane normal to g e1.
    const Vector u = haar_orthogonal(rng, n).col(0);
    const Vector h = c.points().transpose() * u;
    int count = 0;
    for (Eigen::Index i = 0; i + 1 < h.size(); ++i) {
      if ((h[i] >= 0) != (h[i + 1] >= 0)) ++count;
    }
    sum += count;
    sum_sq += static_cast<Real>(count) * count;
  }
  const Real mean = sum / static_cast<Real>(m);
  const Real var = std::max<Real>(0, (sum_sq - sum * mean) / static_cast<Real>(m - 1));
  return {kPi * mean, kPi * std::sqrt(var / static_cast<Real>(m)), m};
}

std::string_view relation_name(WitnessRelation relation) {
  return relation == WitnessRelation::coincide ? "coincide" : "antipodal";
}

bool EquatorWitness::satisfies(Real tol) const {
  const bool ordered = t1 < tau1 && tau1 < tau2 && tau2 < t2;
  const bool opposite = (v_proj_1 > 0 && v_proj_2 < 0) || (v_proj_1 < 0 && v_proj_2 > 0);
  const bool fast = std::abs(v_proj_1) >= threshold - tol && std::abs(v_proj_2) >= threshold - tol;
  return ordered && opposite && fast;
}

EquatorWitness find_circle_witness(const Curve& c, Real theta) {
  if (c.dim() != 2) throw Error(ErrorCode::DimensionMismatch, "circle witness needs a planar curve");
  if (!(theta > 4)) throw Error(ErrorCode::InvalidArgument, "theta must exceed 4");
  const Real radius = c.points().colwise().norm().mean();
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (std::abs(c.point(i).norm() - radius) > kCircleTolerance * radius) {
      throw Error(ErrorCode::InvalidCurve, "samples do not lie on a circle about the origin");
    }
  }
  const Vector e1 = Vector::Unit(2, 0);
  const Vector e2 = Vector::Unit(2, 1);
  auto proj = project_angular(c, e1, e2, true, radius);
  if (!proj) throw Error(ErrorCode::InvalidCurve, "circle of zero radius");
  const Real s = proj->projected_length;
  if (!(s > kTwoPi * radius * theta)) {
    throw Error(ErrorCode::PreconditionLength,
                "length " + std::to_string(static_cast<double>(s)) + " does not exceed 2 pi R theta = " +
                    std::to_string(static_cast<double>(kTwoPi * radius * theta)));
  }
  const Real duration = c.duration();
  const Real threshold = (c.closed() ? Real(0.25) : open_factor(theta, 4)) * s / duration;
  const Real tol = kTwoPi / std::sqrt(static_cast<Real>(c.size()));
  Matrix plane(2, 2);
  plane << 1, 0, 0, 1;
  auto w = search(proj->track, tol, kPi, threshold, plane, theta, true);
  if (!w) {
    throw Error(ErrorCode::WitnessNotFound, "no opposite-velocity pair reaches " +
                                                std::to_string(static_cast<double>(threshold)));
  }
  w->length = s;
  w->projected_length = s;
  w->threshold = threshold;
  check_returned(*w);
  return *w;
}

EquatorWitness find_equator_witness(const SphericalCurve& sc, Real theta, int trials, std::uint64_t seed) {
  if (!(theta > 4)) throw Error(ErrorCode::InvalidArgument, "theta must exceed 4");
  if (trials < 0) throw Error(ErrorCode::InvalidArgument, "trials must be nonnegative");
  const Curve& c = sc.curve();
  const int n = c.dim();
  if (n < 2) throw Error(ErrorCode::DimensionMismatch, "equator witness needs n >= 2");
  const Real s = sc.length();
  if (!(s > kTwoPi * theta)) {
    throw Error(ErrorCode::PreconditionLength,
                "spherical length " + std::to_string(static_cast<double>(s)) +
                    " does not exceed 2 pi theta = " + std::to_string(static_cast<double>(kTwoPi * theta)));
  }
  const Real threshold = open_factor(theta, 4) * s / c.duration();
  const Real tol = kTwoPi / std::sqrt(static_cast<Real>(c.size()));

  std::vector<std::pair<Matrix, int>> candidates;
  if (n == 2) {
    candidates.emplace_back(Matrix::Identity(2, 2), -1);
  } else {
    // Angular momentum bivector sum x_i ^ dx_i; its dominant plane.
    Matrix A = Matrix::Zero(n, n);
    Matrix M = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < c.segment_count(); ++i) {
      const Vector a = c.point(i);
      const Vector d = c.point(i + 1) - a;
      A += a * d.transpose() - d * a.transpose();
      const Vector mid = a + d / 2;
      M += d.norm() * mid * mid.transpose();
    }
    Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeFullU);
    Matrix momentum = svd.matrixU().leftCols(2);
    candidates.emplace_back(momentum, -1);
    candidates.emplace_back(top_eigenvectors(M, 2), -1);
  }
  Rng rng(seed);
  for (int k = 0; k < trials && n > 2; ++k) candidates.emplace_back(haar_orthogonal(rng, n).leftCols(2), k);

  Real best_projection = 0;
  for (const auto& [plane, trial] : candidates) {
    auto proj = project_angular(c, plane.col(0), plane.col(1), false, 1);
    if (!proj) continue;
    best_projection = std::max(best_projection, proj->projected_length);
    if (proj->projected_length < kProjectionShare * s) continue;
    auto w = search(proj->track, tol, kPi, threshold, plane, theta, true);
    if (!w) continue;
    w->length = s;
    w->projected_length = proj->projected_length;
    w->threshold = threshold;
    w->trial = trial;
    check_returned(*w);
    return *w;
  }
  throw Error(ErrorCode::WitnessNotFound,
              "no candidate plane gave a witness; best projected length " +
                  std::to_string(static_cast<double>(best_projection)) + " of " +
                  std::to_string(static_cast<double>(s)));
}

EquatorWitness find_euclidean_witness(const Curve& c, Real theta, int trials, std::uint64_t seed) {
  if (!(theta > 8)) throw Error(ErrorCode::InvalidArgument, "theta must exceed 8");
  if (trials < 0) throw Error(ErrorCode::InvalidArgument, "trials must be nonnegative");
  const int n = c.dim();
  const CroftonConstants k = crofton_constants(n);
  const Vector center = (c.points().rowwise().minCoeff() + c.points().rowwise().maxCoeff()) / 2;
  const Real radius = (c.points().colwise() - center).colwise().norm().maxCoeff();
  const Real s = curve_length(c);
  if (!(s > theta * k.C_n * radius)) {
    throw Error(ErrorCode::PreconditionLength,
                "length " + std::to_string(static_cast<double>(s)) + " does not exceed theta C_n R = " +
                    std::to_string(static_cast<double>(theta * k.C_n * radius)));
  }
  const Real threshold = open_factor(theta, 8) * s / c.duration();
  const Real tol = 2 * radius / std::sqrt(static_cast<Real>(c.size()));

  std::vector<std::pair<Vector, int>> candidates;
  {
    const Vector mean = c.points().rowwise().mean();
    Matrix M = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < c.segment_count(); ++i) {
      const Vector d = c.point(i + 1) - c.point(i);
      const Vector mid = (c.point(i) + c.point(i + 1)) / 2 - mean;
      M += d.norm() * mid * mid.transpose();
    }
    candidates.emplace_back(top_eigenvectors(M, 1).col(0), -1);
  }
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) candidates.emplace_back(haar_orthogonal(rng, n).col(0), t);

  const auto count = static_cast<std::size_t>(c.size());
  for (const auto& [u, trial] : candidates) {
    Track tr;
    tr.t = c.times();
    tr.key.resize(count);
    for (std::size_t i = 0; i < count; ++i) tr.key[i] = u.dot(c.point(static_cast<Eigen::Index>(i)));
    tr.velocity = centered_rate(tr.t, tr.key);
    tr.parity.assign(count, 0);
    Matrix line(n, 1);
    line.col(0) = u;
    auto w = search(tr, tol, 0, threshold, line, theta, false);
    if (!w) continue;
    w->length = s;
    Real projected = 0;
    for (std::size_t i = 0; i + 1 < count; ++i) projected += std::abs(tr.key[i + 1] - tr.key[i]);
    w->projected_length = projected;
    w->threshold = threshold;
    w->trial = trial;
    check_returned(*w);
    return *w;
  }
  throw Error(ErrorCode::WitnessNotFound, "no candidate line gave a witness");
}

}  // namespace rotlip
