#include "rotlip/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "rotlip/error.hpp"
#include "rotlip/gauss_link.hpp"
#include "rotlip/random.hpp"
#include "rotlip/rotation.hpp"

namespace rotlip {

namespace {

void add_policy(BoundReport& r, const LipschitzPolicy& k) {
  r.inputs.emplace_back("K", k.K);
  r.inputs.emplace_back("K_raw", k.raw);
  r.inputs.emplace_back("safety_factor", k.safety);
  r.inputs.emplace_back("K_method", std::string(lipschitz_method_name(k.method)));
  if (k.method == LipschitzMethod::sampled) r.inputs.emplace_back("K_samples", static_cast<Real>(k.samples));
}

void check_window(const Curve& c, TimeWindow w) {
  if (!(w.end > w.begin)) throw Error(ErrorCode::InvalidArgument, "time window must have positive length");
  if (w.begin < c.t_begin() || w.end > c.t_end()) {
    throw Error(ErrorCode::InvalidArgument, "time window exceeds the trajectory");
  }
}

// First time at which |x(t)| falls to `level`, by linear interpolation of
// the norm between samples, searching from index `from`.
std::optional<Real> first_inside(const Curve& c, Real level, Eigen::Index from) {
  Real prev = c.point(from).norm();
  if (prev <= level) return c.time(from);
  for (Eigen::Index i = from + 1; i < c.size(); ++i) {
    const Real cur = c.point(i).norm();
    if (cur <= level) {
      const Real s = (prev - level) / (prev - cur);
      return c.time(i - 1) + s * (c.time(i) - c.time(i - 1));
    }
    prev = cur;
  }
  return std::nullopt;
}

Curve run_until_inside(const FieldSpec& f, const Vector& x0, Real r, Real ell, const IntegratorConfig& cfg) {
  const Real chunk = 1 / std::abs(ell);
  const Real cap = 20 * (std::log(std::max<Real>(x0.norm() / r, 1)) + 1) / std::abs(ell);
  Curve out = integrate(f, x0, 0, chunk, cfg).curve;
  while (out.point(out.size() - 1).norm() >= r) {
    if (out.t_end() > cap) {
      throw Error(ErrorCode::SampleBudgetExceeded, "trajectory did not reach the inner sphere");
    }
    const Vector last = out.point(out.size() - 1);
    out = concat(out, integrate(f, last, out.t_end(), out.t_end() + chunk, cfg).curve);
  }
  return out;
}

Curve shell_arc(const Curve& c, Real R, Real r) {
  const auto enter = first_inside(c, R, 0);
  if (!enter) throw Error(ErrorCode::InvalidArgument, "trajectory never enters the outer sphere");
  Eigen::Index from = 0;
  while (from + 1 < c.size() && c.time(from + 1) <= *enter) ++from;
  const auto leave = first_inside(c, r, from);
  if (!leave || !(*leave > *enter)) throw Error(ErrorCode::InvalidArgument, "empty shell window");
  return clip(c, {*enter, *leave});
}

}  // namespace

bool is_theorem_id(std::string_view id) {
  return std::find(std::begin(kTheoremIds), std::end(kTheoremIds), id) != std::end(kTheoremIds);
}

Real BoundReport::total_error() const {
  Real sum = 0;
  for (const auto& [name, value] : error_estimates) sum += value;
  return sum;
}

void BoundReport::finalize() {
  margin = bound - measured;
  satisfied = measured <= bound + total_error();
}

Real report_input(const BoundReport& report, std::string_view key) {
  for (const auto& [name, value] : report.inputs) {
    if (name == key) {
      if (const Real* v = std::get_if<Real>(&value)) return *v;
    }
  }
  throw Error(ErrorCode::InvalidArgument, "report has no numeric input '" + std::string(key) + "'");
}

Ball bounding_ball(const Curve& c, Real min_radius) {
  const Vector center = (c.points().rowwise().minCoeff() + c.points().rowwise().maxCoeff()) / 2;
  const Real radius = (c.points().colwise() - center).colwise().norm().maxCoeff();
  return {center, std::max(radius, min_radius)};
}

LipschitzPolicy lipschitz_policy(const FieldSpec& f, const Ball& region, std::uint64_t seed, std::size_t samples) {
  const LipschitzEstimate est = estimate_lipschitz(f, region, samples, seed);
  LipschitzPolicy p;
  p.raw = est.K;
  p.method = est.method;
  p.samples = est.sample_count;
  p.safety = est.method == LipschitzMethod::analytic ? 1 : kLipschitzSafety;
  p.K = p.safety * est.K;
  return p;
}

BoundReport check_stationary_point_bound(const FieldSpec& f, const Vector& x0, const Curve& trajectory,
                                         TimeWindow window, std::uint64_t seed) {
  check_window(trajectory, window);
  const Real speed = f(x0).norm();
  if (!(speed < kStationaryTolerance)) {
    throw Error(ErrorCode::NotStationary, "|v(x0)| = " + std::to_string(static_cast<double>(speed)));
  }
  const Curve arc = clip(trajectory, window);
  const LipschitzPolicy k = lipschitz_policy(f, bounding_ball(arc), seed);
  const RotationResult rot = absolute_rotation_point(arc, x0);

  BoundReport r;
  r.theorem_id = "prop3_1";
  r.measured = rot.value;
  r.bound = k.K * window.length();
  add_policy(r, k);
  r.inputs.emplace_back("T", window.length());
  r.error_estimates.emplace_back("rotation", rot.error_estimate);
  r.finalize();
  return r;
}

BoundReport check_invariant_subspace_bound(const FieldSpec& f, const AffineSubspace& L, const Curve& trajectory,
                                           TimeWindow window, std::uint64_t seed) {
  check_window(trajectory, window);
  if (L.ambient_dim() != f.dim()) throw Error(ErrorCode::DimensionMismatch, "subspace and field dimensions differ");
  const Curve arc = clip(trajectory, window);
  const Ball ball = bounding_ball(arc);

  // Invariance: v is tangent to L at sampled points of L near the trajectory.
  Rng rng(seed);
  const Vector foot = L.closest_point(ball.center);
  Real worst = 0;
  for (int i = 0; i < kInvarianceSamples; ++i) {
    Vector x = foot;
    if (L.dim() > 0) x += L.basis() * uniform_in_ball(rng, Vector::Zero(L.dim()), 2 * ball.radius);
    const Vector v = f(x);
    worst = std::max(worst, (v - L.basis() * (L.basis().transpose() * v)).norm());
  }
  if (!(worst < kInvarianceTolerance)) {
    throw Error(ErrorCode::NotInvariant,
                "field has an orthogonal component of norm " + std::to_string(static_cast<double>(worst)) +
                    " on the subspace");
  }

  const LipschitzPolicy k = lipschitz_policy(f, ball, seed);
  const RotationResult rot = rotation_around_subspace(arc, L, RotationMode::absolute);
  BoundReport r;
  r.theorem_id = "prop3_2";
  r.measured = rot.value;
  r.bound = k.K * window.length();
  add_policy(r, k);
  r.inputs.emplace_back("T", window.length());
  r.inputs.emplace_back("invariance_residual", worst);
  r.error_estimates.emplace_back("rotation", rot.error_estimate);
  r.finalize();
  return r;
}

BoundReport check_any_point_bound(const Curve& trajectory, const Vector& x0, TimeWindow window, Real K) {
  check_window(trajectory, window);
  if (!(K >= 0)) throw Error(ErrorCode::InvalidArgument, "K must be nonnegative");
  const RotationResult rot = absolute_rotation_point(clip(trajectory, window), x0);
  BoundReport r;
  r.theorem_id = "thm3_4";
  r.measured = rot.value;
  r.bound = 4 + K * window.length();
  r.inputs.emplace_back("K", K);
  r.inputs.emplace_back("T", window.length());
  r.error_estimates.emplace_back("rotation", rot.error_estimate);
  r.finalize();
  return r;
}

Real pair_bound(Real K, Real T1, Real T2) {
  return K / kPi * std::min(T1, T2) + K * K * T1 * T2 / kFourPi;
}

Real refined_pair_bound(Real K, Real R1, Real R2, Real T1, Real T2) {
  return K / kFourPi * std::min(R1 * T2, R2 * T1);
}

BoundReport check_pair_bound(const Curve& traj1, const Curve& traj2, TimeWindow w1, TimeWindow w2, Real K) {
  check_window(traj1, w1);
  check_window(traj2, w2);
  if (!(K >= 0)) throw Error(ErrorCode::InvalidArgument, "K must be nonnegative");
  const RotationResult g = gauss_rotation_pair(clip(traj1, w1), clip(traj2, w2), RotationMode::absolute);
  BoundReport r;
  r.theorem_id = "thm3_8";
  r.measured = g.value;
  r.bound = pair_bound(K, w1.length(), w2.length());
  r.inputs.emplace_back("K", K);
  r.inputs.emplace_back("T1", w1.length());
  r.inputs.emplace_back("T2", w2.length());
  r.error_estimates.emplace_back("gauss", g.error_estimate);
  r.finalize();
  return r;
}

RefinedPairReports check_pair_bound_refined(const Curve& traj1, const Curve& traj2, TimeWindow w1,
                                            TimeWindow w2, Real K) {
  check_window(traj1, w1);
  check_window(traj2, w2);
  if (!(K >= 0)) throw Error(ErrorCode::InvalidArgument, "K must be nonnegative");
  const Curve a1 = clip(traj1, w1);
  const Curve a2 = clip(traj2, w2);
  const Real T1 = w1.length();
  const Real T2 = w2.length();
  RefinedPairReports out;

  // Largest rotation of `arc` around grid points of `other`.
  auto max_rotation = [&](const Curve& arc, const Curve& other, Real T, Real& err) {
    Real best = 0;
    for (int i = 0; i < kRefinedGrid; ++i) {
      const Real t = other.t_begin() + other.duration() * static_cast<Real>(i) / (kRefinedGrid - 1);
      Real value = 0;
      try {
        const RotationResult rot = absolute_rotation_point(arc, other.sample_at(t));
        value = rot.value;
        err = std::max(err, rot.error_estimate);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::DistanceTooSmall) throw;
        value = 4 + K * T;
        ++out.fallbacks;
      }
      best = std::max(best, value);
    }
    return best;
  };
  Real err1 = 0;
  Real err2 = 0;
  out.R1 = max_rotation(a1, a2, T1, err1);
  out.R2 = max_rotation(a2, a1, T2, err2);

  const RotationResult g = gauss_rotation_pair(a1, a2, RotationMode::absolute);
  const Real bound = refined_pair_bound(K, out.R1, out.R2, T1, T2);
  for (BoundReport* r : {&out.theorem, &out.corollary}) {
    r->measured = g.value;
    r->bound = bound;
    r->inputs.emplace_back("K", K);
    r->inputs.emplace_back("T1", T1);
    r->inputs.emplace_back("T2", T2);
    r->inputs.emplace_back("R1", out.R1);
    r->inputs.emplace_back("R2", out.R2);
    r->inputs.emplace_back("grid_points", static_cast<Real>(kRefinedGrid));
    r->inputs.emplace_back("fallbacks", static_cast<Real>(out.fallbacks));
    r->error_estimates.emplace_back("gauss", g.error_estimate);
  }
  out.theorem.theorem_id = "thm3_9";
  out.theorem.inputs.emplace_back("bound_R1_T2", K / kFourPi * out.R1 * T2);
  out.theorem.inputs.emplace_back("bound_R2_T1", K / kFourPi * out.R2 * T1);
  out.corollary.theorem_id = "cor3_10";
  out.corollary.inputs.emplace_back("pair_bound", pair_bound(K, T1, T2));
  // R1, R2 errors only move the bound; they are reported, not added to the verdict.
  out.theorem.inputs.emplace_back("R1_error", err1);
  out.theorem.inputs.emplace_back("R2_error", err2);
  out.theorem.finalize();
  out.corollary.finalize();
  return out;
}

SinkSpectrum sink_spectrum(const Matrix& L) {
  if (L.rows() != L.cols() || L.rows() < 1) throw Error(ErrorCode::InvalidArgument, "L must be square");
  Eigen::EigenSolver<Matrix> eig(L);
  SinkSpectrum s;
  s.ell = eig.eigenvalues().real().maxCoeff();
  s.norm = operator_norm(L);
  if (!(s.ell < 0)) {
    throw Error(ErrorCode::EigenvalueSignError,
                "largest real part of an eigenvalue is " + std::to_string(static_cast<double>(s.ell)));
  }
  return s;
}

SinkShell sink_shell_arcs(const Matrix& L, const Vector& x1, const Vector& x2, Real R, Real r,
                          const IntegratorConfig& cfg) {
  if (!(R > r && r > 0)) throw Error(ErrorCode::InvalidArgument, "radii must satisfy R > r > 0");
  const SinkSpectrum spec = sink_spectrum(L);
  const FieldSpec f = FieldSpec::linear(L);
  SinkShell out{shell_arc(run_until_inside(f, x1, r, spec.ell, cfg), R, r),
                shell_arc(run_until_inside(f, x2, r, spec.ell, cfg), R, r)};
  out.T1 = out.arc1.duration();
  out.T2 = out.arc2.duration();
  return out;
}

BoundReport check_log_sink_bound(const Matrix& L, const Vector& x1, const Vector& x2, Real R, Real r, Real C,
                                 const IntegratorConfig& cfg) {
  const SinkSpectrum spec = sink_spectrum(L);
  if (!(C > 0)) throw Error(ErrorCode::InvalidArgument, "C must be positive");
  const SinkShell shell = sink_shell_arcs(L, x1, x2, R, r, cfg);
  const RotationResult g = gauss_rotation_pair(shell.arc1, shell.arc2, RotationMode::absolute);
  const Real log2 = std::pow(std::log(R / r), 2);
  BoundReport rep;
  rep.theorem_id = "thm3_10_log";
  rep.measured = g.value;
  rep.bound = C * spec.norm * log2 / std::abs(spec.ell);
  rep.inputs.emplace_back("C", C);
  rep.inputs.emplace_back("L_norm", spec.norm);
  rep.inputs.emplace_back("ell", spec.ell);
  rep.inputs.emplace_back("R", R);
  rep.inputs.emplace_back("r", r);
  rep.inputs.emplace_back("T1", shell.T1);
  rep.inputs.emplace_back("T2", shell.T2);
  rep.inputs.emplace_back("implied_C", g.value * std::abs(spec.ell) / (spec.norm * log2));
  rep.error_estimates.emplace_back("gauss", g.error_estimate);
  rep.finalize();
  return rep;
}

}  // namespace rotlip
