#include "rotlip/scenarios.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rotlip/error.hpp"

namespace rotlip {

namespace {

constexpr Real kInf = std::numeric_limits<Real>::infinity();

Ball union_ball(const std::vector<Curve>& curves) {
  Eigen::Index total = 0;
  for (const Curve& c : curves) total += c.size();
  Matrix all(curves.front().dim(), total);
  Eigen::Index k = 0;
  for (const Curve& c : curves) {
    all.middleCols(k, c.size()) = c.points();
    k += c.size();
  }
  const Vector center = (all.rowwise().minCoeff() + all.rowwise().maxCoeff()) / 2;
  return {center, std::max<Real>((all.colwise() - center).colwise().norm().maxCoeff(), 1e-3L)};
}

TimeWindow full(const Curve& c) { return {c.t_begin(), c.t_end()}; }

const Curve& first(const Scenario& s) {
  if (s.trajectories.empty()) throw Error(ErrorCode::InvalidArgument, "scenario has no trajectory");
  return s.trajectories.front();
}

void require_pair(const Scenario& s) {
  if (s.trajectories.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "scenario '" + s.name + "' has no trajectory pair");
  }
}

IntegratorConfig helix_config() {
  IntegratorConfig cfg;
  cfg.max_step = 0.02L;
  cfg.chord_tol = 1e-8L;
  return cfg;
}

}  // namespace

Curve circle(const Vector& center, const Vector& e1, const Vector& e2, Real radius, Eigen::Index n, Real phase) {
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "a circle needs at least 3 samples");
  std::vector<Real> t(static_cast<std::size_t>(n + 1));
  Matrix p(center.size(), n + 1);
  for (Eigen::Index k = 0; k <= n; ++k) {
    const Real a = (static_cast<Real>(k) + phase) * kTwoPi / static_cast<Real>(n);
    t[static_cast<std::size_t>(k)] = kTwoPi * static_cast<Real>(k) / static_cast<Real>(n);
    p.col(k) = center + radius * (std::cos(a) * e1 + std::sin(a) * e2);
  }
  return Curve(std::move(t), std::move(p), true);
}

Curve unit_circle(Eigen::Index n) {
  return circle(Vector::Zero(2), Vector::Unit(2, 0), Vector::Unit(2, 1), 1, n);
}

Curve helix(Real turns, Eigen::Index samples_per_turn, Real pitch) {
  const auto n = static_cast<Eigen::Index>(std::ceil(turns * static_cast<Real>(samples_per_turn)));
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "helix needs a positive number of samples");
  std::vector<Real> t(static_cast<std::size_t>(n + 1));
  Matrix p(3, n + 1);
  for (Eigen::Index k = 0; k <= n; ++k) {
    const Real s = kTwoPi * turns * static_cast<Real>(k) / static_cast<Real>(n);
    t[static_cast<std::size_t>(k)] = s;
    p.col(k) << std::cos(s), std::sin(s), pitch * s;
  }
  return Curve(std::move(t), std::move(p));
}

std::pair<Curve, Curve> hopf_pair(Eigen::Index n) {
  const Vector e1 = Vector::Unit(3, 0);
  const Vector e2 = Vector::Unit(3, 1);
  const Vector e3 = Vector::Unit(3, 2);
  return {circle(Vector::Zero(3), e1, e2, 1, n), circle(e1, e1, e3, 1, n, 0.5L)};
}

Matrix sink_matrix() {
  Matrix L = Matrix::Zero(3, 3);
  L(0, 0) = -1;
  L(1, 1) = -1;
  L(1, 2) = 2;
  L(2, 1) = -2;
  L(2, 2) = -1;
  return L;
}

Vector sink_closed_form(const Vector& x0, Real t) {
  const Real d = std::exp(-t);
  const Real c = std::cos(2 * t);
  const Real s = std::sin(2 * t);
  return make_vector({d * x0[0], d * (c * x0[1] + s * x0[2]), d * (-s * x0[1] + c * x0[2])});
}

Vector twist_offset(Real x1) {
  if (x1 <= 0) return Vector::Zero(2);
  const Real damp = std::exp(-1 / (x1 * x1));
  return make_vector({damp * std::cos(1 / x1), damp * std::sin(1 / x1)});
}

IntegratorConfig spiral_config() {
  IntegratorConfig cfg;
  cfg.chord_tol = 1e-6L;
  cfg.observation_centers = {Vector::Zero(2)};
  return cfg;
}

IntegratorConfig twist_config() {
  IntegratorConfig cfg;
  // The offsets from the axis reach exp(-1600) near x1 = 0.025, so the error
  // control has to be purely relative.
  cfg.abs_tol = 1e-4000L;
  cfg.rel_tol = 1e-10L;
  cfg.max_step = 1e-3L;
  cfg.chord_tol = kInf;
  return cfg;
}

IntegratorConfig sink_config() {
  IntegratorConfig cfg;
  cfg.max_step = 0.01L;
  cfg.chord_tol = 1e-8L;
  return cfg;
}

Curve spiral_trajectory(Real T, const Vector& x0) {
  return integrate_trajectory(FieldSpec::spiral2d(), x0, 0, T, spiral_config());
}

Curve twist_trajectory(Real a, Real b, Real y2, Real y3) {
  if (!(b > a)) throw Error(ErrorCode::InvalidArgument, "need b > a");
  const Vector w = twist_offset(a);
  const Vector x0 = make_vector({a, w[0] + y2, w[1] + y3});
  return integrate_trajectory(FieldSpec::twist3d(), x0, 0, b - a, twist_config());
}

Curve sink_trajectory(const Vector& x0, Real T) {
  return integrate_trajectory(FieldSpec::linear(sink_matrix()), x0, 0, T, sink_config());
}

Real calibrate_log_sink_constant() {
  static const Real value = [] {
    const BoundReport rep = check_log_sink_bound(sink_matrix(), make_vector({1, 1, 0}), make_vector({1, -1, 0}), 1,
                                                 std::exp(Real(-1)), 1, sink_config());
    return 1.5L * report_input(rep, "implied_C");
  }();
  return value;
}

std::vector<std::string> scenario_names() {
  return {"spiral", "sink", "sink-pair", "twist-line", "twist-pair", "constant-pair", "helical-pair"};
}

Scenario make_scenario(std::string_view name) {
  const Vector o3 = Vector::Zero(3);
  const AffineSubspace x_axis = AffineSubspace::line(o3, Vector::Unit(3, 0));
  if (name == "spiral") {
    return {"spiral", "spiral2d from (0.5, 0) over T = 10", FieldSpec::spiral2d(),
            {spiral_trajectory(10)}, Vector::Zero(2), make_vector({0.9L, 0}),
            AffineSubspace::point(Vector::Zero(2))};
  }
  if (name == "sink") {
    return {"sink", "linear sink from (1, 1, 0) over T = 5", FieldSpec::linear(sink_matrix()),
            {sink_trajectory(make_vector({1, 1, 0}), 5)}, o3, make_vector({0.2L, 0.3L, -0.1L}), x_axis};
  }
  if (name == "sink-pair") {
    return {"sink-pair", "linear sink from (1, 1, 0) and (1, -1, 0) over T = 3", FieldSpec::linear(sink_matrix()),
            {sink_trajectory(make_vector({1, 1, 0}), 3), sink_trajectory(make_vector({1, -1, 0}), 3)}, o3,
            make_vector({0.2L, 0.3L, -0.1L}), x_axis};
  }
  if (name == "twist-line") {
    return {"twist-line", "twist3d along the image of the x1-axis, x1 from 0.05 to 0.5", FieldSpec::twist3d(),
            {twist_trajectory(0.05L, 0.5L)}, o3, o3, x_axis};
  }
  if (name == "twist-pair") {
    return {"twist-pair", "twist3d with offsets (1, 0) and (-1, 0), x1 from 0.05 to 0.3", FieldSpec::twist3d(),
            {twist_trajectory(0.05L, 0.3L, 1, 0), twist_trajectory(0.05L, 0.3L, -1, 0)}, o3, o3, x_axis};
  }
  if (name == "constant-pair") {
    const FieldSpec f = FieldSpec::constant(make_vector({1, 0, 0}));
    IntegratorConfig cfg;
    return {"constant-pair", "constant field (1, 0, 0) from (0, 1, 0) and (0, 2, 0) over T = 1", f,
            {integrate_trajectory(f, make_vector({0, 1, 0}), 0, 1, cfg),
             integrate_trajectory(f, make_vector({0, 2, 0}), 0, 1, cfg)},
            o3, make_vector({0.5L, 1 + 1e-4L, 0}), x_axis};
  }
  if (name == "helical-pair") {
    Matrix a = Matrix::Zero(3, 3);
    a(0, 1) = -1;
    a(1, 0) = 1;
    const FieldSpec f = FieldSpec::affine(a, make_vector({0, 0, kHelixPitch}));
    const Real T = 5 * kTwoPi;
    return {"helical-pair", "rotation about the z-axis with axial speed 5, 5 turns from (1, 0, 0) and (-1, 0, 0)", f,
            {integrate_trajectory(f, make_vector({1, 0, 0}), 0, T, helix_config()),
             integrate_trajectory(f, make_vector({-1, 0, 0}), 0, T, helix_config())},
            o3, o3, std::nullopt};
  }
  throw Error(ErrorCode::InvalidArgument, "unknown scenario '" + std::string(name) + "'");
}

std::vector<BoundReport> verify_scenario(const Scenario& s, std::string_view id, std::uint64_t seed) {
  if (!is_theorem_id(id)) throw Error(ErrorCode::InvalidArgument, "unknown theorem id '" + std::string(id) + "'");
  if (id == "prop3_1") {
    if (!s.stationary_point) throw Error(ErrorCode::InvalidArgument, "scenario has no candidate stationary point");
    return {check_stationary_point_bound(s.field, *s.stationary_point, first(s), full(first(s)), seed)};
  }
  if (id == "prop3_2") {
    if (!s.subspace) throw Error(ErrorCode::InvalidArgument, "scenario has no subspace");
    return {check_invariant_subspace_bound(s.field, *s.subspace, first(s), full(first(s)), seed)};
  }
  if (id == "thm3_10_log") {
    if (s.name != "sink-pair") throw Error(ErrorCode::InvalidArgument, "the logarithmic bound runs on sink-pair only");
    const Real C = calibrate_log_sink_constant();
    std::vector<BoundReport> out;
    for (int k = 1; k <= 4; ++k) {
      out.push_back(check_log_sink_bound(s.field.matrix(), s.trajectories[0].point(0), s.trajectories[1].point(0), 1,
                                         std::exp(static_cast<Real>(-k)), C, sink_config()));
    }
    return out;
  }
  if (id == "thm3_4") {
    if (!s.observation_point) throw Error(ErrorCode::InvalidArgument, "scenario has no observation point");
    const LipschitzPolicy k = lipschitz_policy(s.field, bounding_ball(first(s)), seed);
    BoundReport r = check_any_point_bound(first(s), *s.observation_point, full(first(s)), k.K);
    r.inputs.emplace_back("K_method", std::string(lipschitz_method_name(k.method)));
    r.inputs.emplace_back("safety_factor", k.safety);
    return {r};
  }
  require_pair(s);
  const LipschitzPolicy k = lipschitz_policy(s.field, union_ball(s.trajectories), seed);
  const Curve& a = s.trajectories[0];
  const Curve& b = s.trajectories[1];
  if (id == "thm3_8") {
    BoundReport r = check_pair_bound(a, b, full(a), full(b), k.K);
    r.inputs.emplace_back("K_method", std::string(lipschitz_method_name(k.method)));
    r.inputs.emplace_back("safety_factor", k.safety);
    return {r};
  }
  RefinedPairReports refined = check_pair_bound_refined(a, b, full(a), full(b), k.K);
  return {id == "thm3_9" ? refined.theorem : refined.corollary};
}

}  // namespace rotlip
