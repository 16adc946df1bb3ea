#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rotlip/error.hpp"
#include "rotlip/flow.hpp"
#include "rotlip/rotation.hpp"
#include "rotlip/scenarios.hpp"

using namespace rotlip;

TEST_SUITE("flow") {
  TEST_CASE("constant field") {
    const Curve c = integrate_trajectory(FieldSpec::constant(make_vector({1, 0, 0})), Vector::Zero(3), 0, 1);
    CHECK((c.point(c.size() - 1) - make_vector({1, 0, 0})).norm() < 1e-12L);
    CHECK(c.t_end() == 1);
  }

  TEST_CASE("linear sink against the matrix exponential") {
    const Vector x0 = make_vector({1, 1, 0});
    const Curve c = sink_trajectory(x0, 3);
    const oracle::MatX E = oracle::expm(oracle::MatX(sink_matrix() * 3));
    const Vector expected = E * x0;
    CHECK((c.point(c.size() - 1) - expected).norm() < 1e-8L);
    // Every sample sits on the exact solution.
    Real worst = 0;
    for (Eigen::Index i = 0; i < c.size(); i += 50) {
      const Vector ref = oracle::expm(oracle::MatX(sink_matrix() * c.time(i))) * x0;
      worst = std::max(worst, (c.point(i) - ref).norm());
    }
    CHECK(worst < 1e-8L);
  }

  TEST_CASE("spiral radius decreases to a positive limit") {
    const Curve c = spiral_trajectory(10);
    Real prev = 1;
    for (Eigen::Index i = 0; i < c.size(); ++i) {
      const Real r = c.point(i).norm();
      CHECK(r < prev);
      prev = r;
    }
    CHECK(prev > 0);
    CHECK(prev < 0.5L);
  }

  TEST_CASE("d(r^2)/dt is negative inside the unit disc") {
    const FieldSpec f = FieldSpec::spiral2d();
    const Curve c = spiral_trajectory(10, make_vector({0.95L, 0.1L}));
    for (Eigen::Index i = 0; i < c.size(); ++i) {
      const Vector x = c.point(i);
      CHECK(2 * x.dot(f(x)) < 0);
    }
  }

  TEST_CASE("times strictly increase and start at t0") {
    const Curve c = integrate_trajectory(FieldSpec::spiral2d(), make_vector({0.5L, 0}), 2, 4);
    CHECK(c.t_begin() == 2);
    CHECK(c.t_end() == 4);
    for (Eigen::Index i = 1; i < c.size(); ++i) CHECK(c.time(i) > c.time(i - 1));
  }

  TEST_CASE("halving tolerances moves the end point by less than the error estimate") {
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-8L;
    cfg.abs_tol = 1e-8L;
    cfg.chord_tol = std::numeric_limits<Real>::infinity();
    const Vector x0 = make_vector({0.5L, 0.2L});
    const Trajectory coarse = integrate(FieldSpec::spiral2d(), x0, 0, 5, cfg);
    cfg.rel_tol /= 2;
    cfg.abs_tol /= 2;
    const Trajectory fine = integrate(FieldSpec::spiral2d(), x0, 0, 5, cfg);
    const Real gap = (coarse.curve.point(coarse.curve.size() - 1) - fine.curve.point(fine.curve.size() - 1)).norm();
    CHECK(coarse.stats.local_error_sum > 0);
    CHECK(gap < 10 * coarse.stats.local_error_sum);
  }

  TEST_CASE("time reversal returns to the start") {
    IntegratorConfig cfg;
    cfg.chord_tol = std::numeric_limits<Real>::infinity();
    const FieldSpec f = FieldSpec::linear(sink_matrix());
    const Vector x0 = make_vector({0.3L, -0.4L, 0.5L});
    const Trajectory fwd = integrate(f, x0, 0, 2, cfg);
    const Trajectory back = integrate(f.reversed(), fwd.curve.point(fwd.curve.size() - 1), 0, 2, cfg);
    // Forward errors are amplified by at most exp(K T) on the way back.
    const Real budget = fwd.stats.local_error_sum * std::exp(std::sqrt(5.0L) * 2) + back.stats.local_error_sum;
    CHECK((back.curve.point(back.curve.size() - 1) - x0).norm() < budget);
  }

  TEST_CASE("chord deviation stays below the chord tolerance") {
    IntegratorConfig cfg;
    cfg.chord_tol = 1e-6L;
    const FieldSpec f = FieldSpec::linear(sink_matrix());
    const Vector x0 = make_vector({1, 1, 0});
    const Curve c = integrate_trajectory(f, x0, 0, 3, cfg);
    Real worst = 0;
    for (Eigen::Index i = 0; i + 1 < c.size(); ++i) {
      const Real tm = (c.time(i) + c.time(i + 1)) / 2;
      const Vector exact = oracle::expm(oracle::MatX(sink_matrix() * tm)) * x0;
      worst = std::max(worst, point_segment_distance(exact, c.point(i), c.point(i + 1)));
    }
    CHECK(worst < cfg.chord_tol);
  }

  TEST_CASE("segments seen from an observation center subtend at most 0.05 rad") {
    const Curve c = spiral_trajectory(10);
    for (Eigen::Index i = 0; i + 1 < c.size(); ++i) CHECK(arc_angle(c.point(i), c.point(i + 1)) <= 0.05L + 1e-12L);
  }

  TEST_CASE("errors") {
    const FieldSpec f = FieldSpec::spiral2d();
    try {
      (void)integrate_trajectory(f, make_vector({0.5L, 0}), 1, 0);
      FAIL("accepted t1 < t0");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidArgument);
      CHECK(std::string(e.what()).find("t1 must exceed t0") != std::string::npos);
    }
    CHECK_THROWS_AS((void)integrate_trajectory(f, make_vector({0.5L, 0, 0}), 0, 1), Error);
    IntegratorConfig cfg;
    cfg.max_samples = 10;
    try {
      (void)integrate_trajectory(f, make_vector({0.5L, 0}), 0, 10, cfg);
      FAIL("budget ignored");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SampleBudgetExceeded);
    }
    cfg = {};
    cfg.rel_tol = 0;
    CHECK_THROWS_AS((void)integrate_trajectory(f, make_vector({0.5L, 0}), 0, 1, cfg), Error);
  }

  TEST_CASE("fast growth exhausts the sample budget") {
    const Matrix a = 50 * Matrix::Identity(2, 2);
    IntegratorConfig cfg;
    cfg.max_samples = 1000;
    cfg.chord_tol = std::numeric_limits<Real>::infinity();
    try {
      (void)integrate_trajectory(FieldSpec::linear(a), make_vector({1, 1}), 0, 1000, cfg);
      FAIL("no failure");
    } catch (const Error& e) {
      CHECK(is_numerical_failure(e.code()));
    }
  }

  TEST_CASE("step underflow on an unresolvable start") {
    // Pure relative control from the exact axis: the offsets cannot be resolved.
    IntegratorConfig cfg = twist_config();
    try {
      (void)integrate_trajectory(FieldSpec::twist3d(), make_vector({0.05L, 0, 0}), 0, 0.1L, cfg);
      FAIL("no underflow");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::StepUnderflow);
    }
  }
}
