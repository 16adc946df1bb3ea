#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "rotlip/bounds.hpp"
#include "rotlip/error.hpp"
#include "rotlip/gauss_link.hpp"
#include "rotlip/scenarios.hpp"

using namespace rotlip;

namespace {

BoundReport one(std::string_view scenario, std::string_view id) {
  const auto reports = verify_scenario(make_scenario(scenario), id, 42);
  REQUIRE(reports.size() == 1);
  return reports.front();
}

TimeWindow full(const Curve& c) { return {c.t_begin(), c.t_end()}; }

}  // namespace

TEST_SUITE("bounds") {
  TEST_CASE("report invariant") {
    BoundReport r;
    r.measured = 2;
    r.bound = 1;
    r.error_estimates = {{"a", 0.5L}, {"b", 0.6L}};
    r.finalize();
    CHECK(r.satisfied);
    CHECK(r.margin == -1);
    r.error_estimates = {{"a", 0.5L}};
    r.finalize();
    CHECK_FALSE(r.satisfied);
  }

  TEST_CASE("stationary point: spiral") {
    const BoundReport r = one("spiral", "prop3_1");
    CHECK(r.satisfied);
    CHECK(std::abs(r.measured - 10) < 1e-2L);
    CHECK(report_input(r, "K") >= 1);
    CHECK(r.bound == doctest::Approx(report_input(r, "K") * 10));
  }

  TEST_CASE("stationary point: constant curve") {
    Matrix L = Matrix::Zero(2, 2);
    L(1, 1) = -1;
    const Curve c = fixture::polyline({{1, 0}, {1, 0}});
    const BoundReport r = check_stationary_point_bound(FieldSpec::linear(L), Vector::Zero(2), c, full(c));
    CHECK(r.measured == 0);
    CHECK(r.satisfied);
  }

  TEST_CASE("stationary point: linear sink") {
    const Curve c = sink_trajectory(make_vector({1, 1, 0}), 3);
    const BoundReport r =
        check_stationary_point_bound(FieldSpec::linear(sink_matrix()), Vector::Zero(3), c, full(c));
    CHECK(r.satisfied);
    CHECK(r.bound == doctest::Approx(std::sqrt(5.0L) * 3));
  }

  TEST_CASE("stationary point must be stationary") {
    const Curve c = spiral_trajectory(2);
    try {
      (void)check_stationary_point_bound(FieldSpec::spiral2d(), make_vector({0.9L, 0}), c, full(c));
      FAIL("not checked");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotStationary);
    }
  }

  TEST_CASE("invariant subspace: sink around Ox1") {
    const BoundReport r = one("sink-pair", "prop3_2");
    CHECK(r.satisfied);
    CHECK(std::abs(r.measured - 6) < 1e-2L);
    CHECK(r.bound == doctest::Approx(std::sqrt(5.0L) * 3));
  }

  TEST_CASE("invariant subspace: constant field") {
    const FieldSpec f = FieldSpec::constant(make_vector({1, 0, 0}));
    const Curve c = integrate_trajectory(f, make_vector({0, 1, 0}), 0, 1);
    const BoundReport r =
        check_invariant_subspace_bound(f, AffineSubspace::line(Vector::Zero(3), Vector::Unit(3, 0)), c, full(c));
    CHECK(r.measured < 1e-12L);
    CHECK(r.satisfied);
  }

  TEST_CASE("twist field leaves Ox1 non-invariant") {
    try {
      (void)one("twist-line", "prop3_2");
      FAIL("not checked");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotInvariant);
    }
  }

  TEST_CASE("any point: near flyby") {
    const Curve c = fixture::polyline({{-0.5L, 0, 0}, {0, 0, 0}, {0.5L, 0, 0}});
    const BoundReport r = check_any_point_bound(c, make_vector({0, 1e-4L, 0}), full(c), 0);
    CHECK(r.measured < kPi + 1e-3L);
    CHECK(r.measured > kPi - 1e-3L);
    CHECK(r.bound == 4);
    CHECK(r.satisfied);
  }

  TEST_CASE("any point: built-in scenarios") {
    for (const char* s : {"spiral", "sink"}) {
      const BoundReport r = one(s, "thm3_4");
      CHECK(r.satisfied);
    }
  }

  TEST_CASE("any point: guard") {
    const Curve c = fixture::polyline({{-1, 0}, {1, 0}});
    CHECK_THROWS_AS((void)check_any_point_bound(c, Vector::Zero(2), full(c), 1), Error);
  }

  TEST_CASE("any point bound over growing windows") {
    const Curve c = sink_trajectory(make_vector({1, 1, 0}), 5);
    const Vector x0 = make_vector({0.2L, 0.3L, -0.1L});
    const Real K = std::sqrt(5.0L);
    BoundReport prev;
    prev.bound = 4;
    prev.margin = 4;
    Real prev_T = 0;
    for (const Real T : {0.5L, 1.0L, 2.0L, 3.0L, 5.0L}) {
      const Curve w = clip(c, {0, T});
      const BoundReport r = check_any_point_bound(w, x0, full(w), K);
      CHECK(r.satisfied);
      CHECK(r.measured >= prev.measured - r.total_error());
      // The margin can grow by at most what the bound gains.
      CHECK(r.margin - prev.margin <= K * (T - prev_T) + r.total_error() + 1e-12L);
      CHECK(r.bound == doctest::Approx(4 + K * T));
      prev = r;
      prev_T = T;
    }
  }

  TEST_CASE("pair bound on built-in pairs") {
    const BoundReport sink = one("sink-pair", "thm3_8");
    CHECK(sink.satisfied);
    const BoundReport flat = one("constant-pair", "thm3_8");
    CHECK(flat.satisfied);
    CHECK(flat.measured < 1e-9L);
    const BoundReport twist = one("twist-pair", "thm3_8");
    CHECK(twist.satisfied);
    CHECK(std::abs(twist.measured) < 1e-4L);
  }

  TEST_CASE("pair bound guard") {
    const Curve c = sink_trajectory(make_vector({1, 1, 0}), 1);
    try {
      (void)check_pair_bound(c, c, full(c), full(c), 1);
      FAIL("not checked");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::CurvesTooClose);
    }
  }

  TEST_CASE("fallback identity") {
    for (const Real K : {0.5L, 1.0L, 2.236L}) {
      for (const auto& [T1, T2] : {std::pair{1.0L, 3.0L}, std::pair{3.0L, 3.0L}, std::pair{5.0L, 0.7L}}) {
        const Real refined = refined_pair_bound(K, 4 + K * T1, 4 + K * T2, T1, T2);
        const Real coarse = pair_bound(K, T1, T2);
        CHECK(std::abs(refined - coarse) <= 1e-12L * coarse);
        const Real lhs = K / (4 * kPi) * (4 + K * T1) * T2;
        const Real rhs = K / kPi * T2 + K * K / (4 * kPi) * T1 * T2;
        CHECK(std::abs(lhs - rhs) <= 1e-12L * rhs);
      }
    }
  }

  TEST_CASE("refined pair bound: sink pair") {
    const BoundReport thm = one("sink-pair", "thm3_9");
    const BoundReport cor = one("sink-pair", "cor3_10");
    const BoundReport coarse = one("sink-pair", "thm3_8");
    CHECK(thm.satisfied);
    CHECK(cor.satisfied);
    CHECK(thm.bound <= coarse.bound * (1 + 1e-12L));
  }

  TEST_CASE("refined pair bound: parallel constant trajectories") {
    const BoundReport r = one("constant-pair", "thm3_9");
    CHECK(r.satisfied);
    CHECK(r.measured < 1e-9L);
    CHECK(report_input(r, "R1") <= kPi + 1e-6L);
    CHECK(report_input(r, "R2") <= kPi + 1e-6L);
  }

  TEST_CASE("refined pair bound: helical pair") {
    const BoundReport r = one("helical-pair", "thm3_9");
    CHECK(r.satisfied);
    CHECK(std::abs(r.measured - 5) / 5 < 0.02L);
  }

  TEST_CASE("log sink: no rotation for -I") {
    const Matrix L = -Matrix::Identity(3, 3);
    for (const int k : {1, 2, 3}) {
      const BoundReport r = check_log_sink_bound(L, make_vector({1, 1, 0}), make_vector({1, -1, 0}), 1,
                                                 std::exp(static_cast<Real>(-k)), 1, sink_config());
      CHECK(std::abs(r.measured) < 1e-6L);
      CHECK(r.satisfied);
    }
  }

  TEST_CASE("log sink: thin shell") {
    const BoundReport thick = check_log_sink_bound(sink_matrix(), make_vector({1, 1, 0}), make_vector({1, -1, 0}), 1,
                                                   std::exp(Real(-1)), 1, sink_config());
    const BoundReport thin = check_log_sink_bound(sink_matrix(), make_vector({1, 1, 0}), make_vector({1, -1, 0}), 1,
                                                  0.99L, 1, sink_config());
    CHECK(thin.measured < 0.05L * thick.measured);
    CHECK(thin.measured >= 0);
  }

  TEST_CASE("log sink: growth over shells") {
    const Real C = calibrate_log_sink_constant();
    Real prev = 0;
    for (const int k : {1, 2, 3}) {
      const BoundReport r = check_log_sink_bound(sink_matrix(), make_vector({1, 1, 0}), make_vector({1, -1, 0}), 1,
                                                 std::exp(static_cast<Real>(-k)), C, sink_config());
      CHECK(r.satisfied);
      CHECK(r.measured > prev);
      prev = r.measured;
    }
  }

  TEST_CASE("log sink: eigenvalue sign") {
    Matrix L = sink_matrix();
    L(0, 0) = 0.5L;
    try {
      (void)check_log_sink_bound(L, make_vector({1, 1, 0}), make_vector({1, -1, 0}), 1, 0.5L, 1, sink_config());
      FAIL("not checked");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::EigenvalueSignError);
    }
  }

  TEST_CASE("unknown theorem id") {
    CHECK_FALSE(is_theorem_id("thm9_9"));
    CHECK_THROWS_AS((void)verify_scenario(make_scenario("sink"), "thm9_9", 42), Error);
    CHECK_THROWS_AS((void)make_scenario("nope"), Error);
  }
}
