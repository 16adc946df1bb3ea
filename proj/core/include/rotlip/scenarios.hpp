#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rotlip/bounds.hpp"
#include "rotlip/curve.hpp"
#include "rotlip/fields.hpp"
#include "rotlip/flow.hpp"

namespace rotlip {

// Sampled test curves.

/// Circle of the given radius about `center` in the plane spanned by the
/// orthonormal pair (e1, e2), sampled at angles (k + phase) 2 pi / n.
Curve circle(const Vector& center, const Vector& e1, const Vector& e2, Real radius, Eigen::Index n,
             Real phase = 0);

/// Counter-clockwise unit circle about the origin of the plane.
Curve unit_circle(Eigen::Index n);

/// (cos t, sin t, pitch t) for t in [0, 2 pi turns].
Curve helix(Real turns, Eigen::Index samples_per_turn, Real pitch = 1);

/// Unit circle in the xy-plane and unit circle in the xz-plane about
/// (1, 0, 0); the second one is sampled off the xy-plane.
std::pair<Curve, Curve> hopf_pair(Eigen::Index n);

// Fields and trajectories of the worked examples.

/// diag(-1) (+) [[-1, 2], [-2, -1]]: eigenvalues -1 and -1 +- 2i.
Matrix sink_matrix();

/// exp(L t) x0 for the sink matrix.
Vector sink_closed_form(const Vector& x0, Real t);

/// (w1(x1), w2(x1)) = exp(-1/x1^2) (cos(1/x1), sin(1/x1)).
Vector twist_offset(Real x1);

IntegratorConfig spiral_config();
IntegratorConfig twist_config();
IntegratorConfig sink_config();

/// spiral2d from x0 over [0, T], refined against the origin.
Curve spiral_trajectory(Real T, const Vector& x0 = make_vector({0.5L, 0}));

/// twist3d trajectory from (a, w1(a) + y2, w2(a) + y3) until x1 = b.
/// With zero offsets it is the image of the x1-axis.
Curve twist_trajectory(Real a, Real b, Real y2 = 0, Real y3 = 0);

Curve sink_trajectory(const Vector& x0, Real T);

inline constexpr Real kHelixPitch = 5;

/// Calibrated constant of the logarithmic sink bound: 1.5 times the implied
/// constant of the reference sink pair in the shell 1/e <= |x| <= 1.
Real calibrate_log_sink_constant();

// Named scenarios for bound verification.

struct Scenario {
  std::string name;
  std::string description;
  FieldSpec field;
  std::vector<Curve> trajectories;
  std::optional<Vector> stationary_point;
  std::optional<Vector> observation_point;
  std::optional<AffineSubspace> subspace;
};

std::vector<std::string> scenario_names();
Scenario make_scenario(std::string_view name);

/// Runs one theorem check on a scenario. Most checks give one report; the
/// logarithmic sink bound gives one per shell.
std::vector<BoundReport> verify_scenario(const Scenario& s, std::string_view theorem_id, std::uint64_t seed);

}  // namespace rotlip
