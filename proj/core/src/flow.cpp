#include "rotlip/flow.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rotlip/error.hpp"

namespace rotlip {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr Real c2 = 1.0L / 5, c3 = 3.0L / 10, c4 = 4.0L / 5, c5 = 8.0L / 9;
constexpr Real a21 = 1.0L / 5;
constexpr Real a31 = 3.0L / 40, a32 = 9.0L / 40;
constexpr Real a41 = 44.0L / 45, a42 = -56.0L / 15, a43 = 32.0L / 9;
constexpr Real a51 = 19372.0L / 6561, a52 = -25360.0L / 2187, a53 = 64448.0L / 6561,
               a54 = -212.0L / 729;
constexpr Real a61 = 9017.0L / 3168, a62 = -355.0L / 33, a63 = 46732.0L / 5247,
               a64 = 49.0L / 176, a65 = -5103.0L / 18656;
constexpr Real b1 = 35.0L / 384, b3 = 500.0L / 1113, b4 = 125.0L / 192, b5 = -2187.0L / 6784,
               b6 = 11.0L / 84;
// b - b_hat of the embedded 4th order solution.
constexpr Real e1 = 71.0L / 57600, e3 = -71.0L / 16695, e4 = 71.0L / 1920,
               e5 = -17253.0L / 339200, e6 = 22.0L / 525, e7 = -1.0L / 40;

constexpr Real kSafety = 0.9L;
constexpr Real kMinFactor = 0.2L;
constexpr Real kMaxFactor = 5.0L;
constexpr Real kUnderflowRatio = 1e-14L;
constexpr int kMaxBisection = 30;

Real scaled_rms(const Vector& e, const Vector& y0, const Vector& y1, Real rtol, Real atol) {
  Real sum = 0;
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    const Real sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const Real q = e[i] / sc;
    sum += q * q;
  }
  return std::sqrt(sum / static_cast<Real>(e.size()));
}

// Hairer-Wanner starting step.
Real initial_step(const FieldSpec& f, const Vector& y0, const Vector& f0, Real span,
                  const IntegratorConfig& cfg, std::size_t& evals) {
  const Vector zero = Vector::Zero(y0.size());
  const Real d0 = scaled_rms(y0, y0, zero, cfg.rel_tol, cfg.abs_tol);
  const Real d1 = scaled_rms(f0, y0, zero, cfg.rel_tol, cfg.abs_tol);
  Real h0 = (d0 < 1e-5L || d1 < 1e-5L) ? 1e-6L : 0.01L * d0 / d1;
  h0 = std::min({h0, span, cfg.max_step});
  const Vector y1 = y0 + h0 * f0;
  const Vector f1 = f(y1);
  ++evals;
  const Real d2 = scaled_rms(f1 - f0, y0, zero, cfg.rel_tol, cfg.abs_tol) / h0;
  const Real m = std::max(d1, d2);
  const Real h1 = m <= 1e-15L ? std::max(1e-6L, h0 * 1e-3L) : std::pow(0.01L / m, 1.0L / 5);
  return std::min({100 * h0, h1, span, cfg.max_step});
}

struct Hermite {
  Real t0, h;
  Vector y0, y1, f0, f1;

  [[nodiscard]] Vector at(Real s) const {
    const Real s2 = s * s, s3 = s2 * s;
    const Real h00 = 2 * s3 - 3 * s2 + 1;
    const Real h10 = s3 - 2 * s2 + s;
    const Real h01 = -2 * s3 + 3 * s2;
    const Real h11 = s3 - s2;
    return h00 * y0 + h10 * h * f0 + h01 * y1 + h11 * h * f1;
  }
};

class Emitter {
 public:
  Emitter(const IntegratorConfig& cfg, int dim) : cfg_(cfg), dim_(dim) {}

  void push(Real t, const Vector& x) {
    if (times_.size() >= cfg_.max_samples) {
      throw Error(ErrorCode::SampleBudgetExceeded,
                  "more than " + std::to_string(cfg_.max_samples) + " output samples");
    }
    times_.push_back(t);
    points_.push_back(x);
  }

  // Emits the interior and end samples of one accepted step.
  void step(const Hermite& p) {
    const Real tol = cfg_.effective_chord_tol();
    long pieces = 1;
    if (std::isfinite(tol)) {
      const Real dev = p.h * (p.f1 - p.f0).norm() / 8;
      if (dev > tol) pieces = static_cast<long>(std::ceil(std::sqrt(dev / tol)));
      if (static_cast<std::size_t>(pieces) > cfg_.max_samples) {
        throw Error(ErrorCode::SampleBudgetExceeded, "chord refinement exceeds the sample budget");
      }
    }
    Real s_prev = 0;
    Vector x_prev = p.y0;
    for (long k = 1; k <= pieces; ++k) {
      const Real s = static_cast<Real>(k) / static_cast<Real>(pieces);
      const Vector x = k == pieces ? p.y1 : p.at(s);
      refine(p, s_prev, x_prev, s, x, 0);
      s_prev = s;
      x_prev = x;
    }
  }

  Curve finish() {
    Matrix m(dim_, static_cast<Eigen::Index>(points_.size()));
    for (std::size_t i = 0; i < points_.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = points_[i];
    return Curve(std::move(times_), std::move(m));
  }

 private:
  [[nodiscard]] bool too_wide(const Vector& a, const Vector& b) const {
    for (const Vector& c : cfg_.observation_centers) {
      const Vector da = a - c;
      const Vector db = b - c;
      if (!(da.norm() > 0) || !(db.norm() > 0)) continue;
      if (arc_angle(da, db) > cfg_.max_subtended) return true;
    }
    return false;
  }

  void refine(const Hermite& p, Real sa, const Vector& xa, Real sb, const Vector& xb, int depth) {
    if (depth < kMaxBisection && too_wide(xa, xb)) {
      const Real sm = (sa + sb) / 2;
      const Vector xm = p.at(sm);
      refine(p, sa, xa, sm, xm, depth + 1);
      refine(p, sm, xm, sb, xb, depth + 1);
      return;
    }
    const Real t = sb >= 1 ? p.t0 + p.h : p.t0 + sb * p.h;
    if (t > times_.back()) push(t, xb);
  }

  const IntegratorConfig& cfg_;
  int dim_;
  std::vector<Real> times_;
  std::vector<Vector> points_;
};

}  // namespace

void IntegratorConfig::validate() const {
  auto in_unit = [](Real v) { return v > 0 && v < 1; };
  if (!in_unit(rel_tol) || !in_unit(abs_tol)) throw Error(ErrorCode::InvalidArgument, "tolerances must lie in (0, 1)");
  if (!(max_step > 0)) throw Error(ErrorCode::InvalidArgument, "max_step must be positive");
  if (max_samples < 2) throw Error(ErrorCode::InvalidArgument, "max_samples must be at least 2");
  if (chord_tol < 0 || std::isnan(chord_tol)) throw Error(ErrorCode::InvalidArgument, "chord_tol must be nonnegative");
  if (!(max_subtended > 0)) throw Error(ErrorCode::InvalidArgument, "max_subtended must be positive");
}

Trajectory integrate(const FieldSpec& f, const Vector& x0, Real t0, Real t1,
                     const IntegratorConfig& cfg) {
  cfg.validate();
  if (!(t1 > t0)) throw Error(ErrorCode::InvalidArgument, "t1 must exceed t0");
  if (x0.size() != f.dim()) throw Error(ErrorCode::DimensionMismatch, "x0 dimension does not match the field");
  for (const Vector& c : cfg.observation_centers) {
    if (c.size() != f.dim()) throw Error(ErrorCode::DimensionMismatch, "observation center dimension");
  }

  const Real span = t1 - t0;
  const Real h_min = kUnderflowRatio * span;
  IntegrationStats stats;
  Emitter out(cfg, f.dim());

  Vector y = x0;
  Real t = t0;
  Vector k1 = f(y);
  stats.evaluations = 1;
  out.push(t, y);
  Real h = initial_step(f, y, k1, span, cfg, stats.evaluations);

  while (t < t1) {
    bool last = false;
    if (t + h >= t1 || t1 - (t + h) < h_min) {
      h = t1 - t;
      last = true;
    }
    if (h < h_min && !last) {
      throw Error(ErrorCode::StepUnderflow, "step size fell below 1e-14 of the interval at t = " +
                                                std::to_string(static_cast<double>(t)));
    }
    const Vector k2 = f(y + h * (a21 * k1));
    const Vector k3 = f(y + h * (a31 * k1 + a32 * k2));
    const Vector k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vector k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vector k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Vector y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Vector k7 = f(y_new);
    stats.evaluations += 6;
    const Vector err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const Real norm = scaled_rms(err, y, y_new, cfg.rel_tol, cfg.abs_tol);

    if (!std::isfinite(norm)) {
      ++stats.rejected;
      h *= kMinFactor;
      if (h < h_min) throw Error(ErrorCode::StepUnderflow, "non-finite field values near t = " +
                                                               std::to_string(static_cast<double>(t)));
      continue;
    }
    if (norm <= 1) {
      const Real t_new = last ? t1 : t + h;
      out.step(Hermite{t, t_new - t, y, y_new, k1, k7});
      stats.local_error_sum += err.norm();
      ++stats.accepted;
      t = t_new;
      y = y_new;
      k1 = k7;
      const Real grow = norm == 0 ? kMaxFactor : std::clamp(kSafety * std::pow(norm, -0.2L), kMinFactor, kMaxFactor);
      h = std::min(h * grow, cfg.max_step);
    } else {
      ++stats.rejected;
      h *= std::max(kMinFactor, kSafety * std::pow(norm, -0.2L));
      if (h < h_min) {
        throw Error(ErrorCode::StepUnderflow, "step size fell below 1e-14 of the interval at t = " +
                                                  std::to_string(static_cast<double>(t)));
      }
    }
  }
  return {out.finish(), stats};
}

Curve integrate_trajectory(const FieldSpec& f, const Vector& x0, Real t0, Real t1,
                           const IntegratorConfig& cfg) {
  return integrate(f, x0, t0, t1, cfg).curve;
}

}  // namespace rotlip
