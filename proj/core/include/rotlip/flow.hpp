#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "rotlip/curve.hpp"
#include "rotlip/fields.hpp"

namespace rotlip {

struct IntegratorConfig {
  Real rel_tol = 1e-10L;
  Real abs_tol = 1e-12L;
  Real max_step = std::numeric_limits<Real>::infinity();
  std::size_t max_samples = 2'000'000;
  /// Allowed deviation of an output chord from the interpolated trajectory.
  /// Zero means abs_tol; infinity disables chord refinement.
  Real chord_tol = 0;
  /// Output segments are bisected until none subtends more than
  /// max_subtended radians from any of these points.
  std::vector<Vector> observation_centers;
  Real max_subtended = 0.05L;

  /// Throws InvalidArgument on out-of-range settings.
  void validate() const;
  [[nodiscard]] Real effective_chord_tol() const { return chord_tol > 0 ? chord_tol : abs_tol; }
};

struct IntegrationStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t evaluations = 0;
  /// Sum over accepted steps of the embedded error estimate (Euclidean norm).
  Real local_error_sum = 0;
};

struct Trajectory {
  Curve curve;
  IntegrationStats stats;
};

/// Adaptive Dormand-Prince 5(4) integration of dx/dt = f(x) on [t0, t1].
/// Output samples are the accepted step endpoints, refined by cubic Hermite
/// dense output per the chord and observation-center settings.
Trajectory integrate(const FieldSpec& f, const Vector& x0, Real t0, Real t1,
                     const IntegratorConfig& cfg = {});

Curve integrate_trajectory(const FieldSpec& f, const Vector& x0, Real t0, Real t1,
                           const IntegratorConfig& cfg = {});

}  // namespace rotlip
