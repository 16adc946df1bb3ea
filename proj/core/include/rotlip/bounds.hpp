#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "rotlip/curve.hpp"
#include "rotlip/fields.hpp"
#include "rotlip/flow.hpp"

namespace rotlip {

inline constexpr std::string_view kTheoremIds[] = {"prop3_1", "prop3_2",  "thm3_4",     "thm3_8",
                                                   "thm3_9",  "cor3_10", "thm3_10_log"};

bool is_theorem_id(std::string_view id);

using ReportValue = std::variant<Real, std::string>;

struct BoundReport {
  std::string theorem_id;
  Real measured = 0;
  Real bound = 0;
  Real margin = 0;
  bool satisfied = false;
  std::vector<std::pair<std::string, ReportValue>> inputs;
  std::vector<std::pair<std::string, Real>> error_estimates;

  [[nodiscard]] Real total_error() const;
  /// Sets margin and satisfied from measured, bound and the error terms.
  void finalize();
};

/// Lipschitz constant used by a bound: analytic when available, otherwise
/// the sampled estimate times the safety factor.
struct LipschitzPolicy {
  Real K = 0;
  Real raw = 0;
  Real safety = 1;
  LipschitzMethod method = LipschitzMethod::analytic;
  std::size_t samples = 0;
};

inline constexpr Real kLipschitzSafety = 1.1L;
inline constexpr std::size_t kLipschitzSamples = 20000;
inline constexpr Real kStationaryTolerance = 1e-10L;
inline constexpr Real kInvarianceTolerance = 1e-8L;
inline constexpr int kInvarianceSamples = 100;
inline constexpr int kRefinedGrid = 64;

/// Smallest ball (about the bounding-box centre) containing the curve; the
/// radius is at least `min_radius`.
Ball bounding_ball(const Curve& c, Real min_radius = 1e-3L);

LipschitzPolicy lipschitz_policy(const FieldSpec& f, const Ball& region, std::uint64_t seed,
                                 std::size_t samples = kLipschitzSamples);

/// Rotation around a stationary point x0 against K * T.
BoundReport check_stationary_point_bound(const FieldSpec& f, const Vector& x0, const Curve& trajectory,
                                         TimeWindow window, std::uint64_t seed = 42);

/// Rotation around an invariant affine subspace L against K * T. Throws
/// NotInvariant if v has an orthogonal component on L.
BoundReport check_invariant_subspace_bound(const FieldSpec& f, const AffineSubspace& L,
                                           const Curve& trajectory, TimeWindow window,
                                           std::uint64_t seed = 42);

/// Rotation around an arbitrary point against 4 + K * T.
BoundReport check_any_point_bound(const Curve& trajectory, const Vector& x0, TimeWindow window, Real K);

Real pair_bound(Real K, Real T1, Real T2);
Real refined_pair_bound(Real K, Real R1, Real R2, Real T1, Real T2);

/// Mutual absolute rotation (Gauss integral, turns) against
/// (K / pi) min(T1, T2) + K^2 T1 T2 / (4 pi).
BoundReport check_pair_bound(const Curve& traj1, const Curve& traj2, TimeWindow w1, TimeWindow w2, Real K);

struct RefinedPairReports {
  BoundReport theorem;    // thm3_9
  BoundReport corollary;  // cor3_10
  Real R1 = 0;
  Real R2 = 0;
  int fallbacks = 0;
};

/// R1 (R2) is the largest rotation of traj1 (traj2) around 64 points of the
/// other trajectory; grid points that hit the distance guard use 4 + K * T.
RefinedPairReports check_pair_bound_refined(const Curve& traj1, const Curve& traj2, TimeWindow w1,
                                            TimeWindow w2, Real K);

struct SinkShell {
  Curve arc1;
  Curve arc2;
  Real T1 = 0;
  Real T2 = 0;
};

/// Eigenvalue data of a sink: ell = largest real part (must be negative).
struct SinkSpectrum {
  Real ell = 0;
  Real norm = 0;
};

SinkSpectrum sink_spectrum(const Matrix& L);

/// Trajectories of x' = L x from both starts, clipped to r <= |x| <= R.
SinkShell sink_shell_arcs(const Matrix& L, const Vector& x1, const Vector& x2, Real R, Real r,
                          const IntegratorConfig& cfg);

/// Mutual absolute rotation inside the shell against C |L| log^2(R/r) / |ell|.
/// The report carries the implied constant measured |ell| / (|L| log^2(R/r)).
BoundReport check_log_sink_bound(const Matrix& L, const Vector& x1, const Vector& x2, Real R, Real r,
                                 Real C, const IntegratorConfig& cfg);

Real report_input(const BoundReport& report, std::string_view key);

}  // namespace rotlip
