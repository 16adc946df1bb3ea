#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "rotlip/error.hpp"
#include "rotlip/gauss_link.hpp"
#include "rotlip/scenarios.hpp"

using namespace rotlip;

namespace {

const AffineSubspace kZAxis = AffineSubspace::line(Vector::Zero(3), Vector::Unit(3, 2));

Curve axis_segment(Real M, int n) {
  std::vector<Real> t;
  std::vector<Vector> p;
  for (int k = 0; k <= n; ++k) {
    const Real z = -M + 2 * M * k / n;
    t.push_back(z);
    p.push_back(make_vector({0, 0, z}));
  }
  return Curve::from_points(std::move(t), p);
}

// Open path from (0, 0, -3) to (0, 0, 3) pushed sideways by a bump that keeps
// it away from the unit circle.
Curve deformed_path(Real amplitude, Real phase, int n) {
  std::vector<Real> t;
  std::vector<Vector> p;
  for (int k = 0; k <= n; ++k) {
    const Real s = static_cast<Real>(k) / n;
    const Real bump = amplitude * std::sin(kPi * s);
    const Real z = -3 + 6 * s;
    const Real w = 1 - std::exp(-z * z);
    p.push_back(make_vector({bump * w * std::cos(phase), bump * w * std::sin(phase), z}));
    t.push_back(s);
  }
  return Curve::from_points(std::move(t), p);
}

}  // namespace

TEST_SUITE("gauss-link") {
  TEST_CASE("unit circle against the z-axis") {
    const Curve c = circle(Vector::Zero(3), Vector::Unit(3, 0), Vector::Unit(3, 1), 1, 2000);
    const Curve seg = truncated_line(kZAxis, c, 100);
    const RotationResult g = gauss_rotation_pair(c, seg, RotationMode::signed_);
    CHECK(g.convention == RotationConvention::gauss_turns);
    CHECK(std::abs(g.value - 1) < 1e-3L);
    CHECK(std::abs(g.value - oracle::circle_axis_gauss(100)) <= g.error_estimate);
  }

  TEST_CASE("polyline Gauss integral matches the solid-angle formula") {
    const Curve c = circle(make_vector({0.1L, -0.2L, 0.05L}), Vector::Unit(3, 0), Vector::Unit(3, 1), 1, 300);
    for (const Curve& path : {axis_segment(5, 80), deformed_path(0.6L, 0.3L, 120), helix(2, 40, 0.4L)}) {
      const RotationResult g = gauss_rotation_pair(c, path, RotationMode::signed_);
      const Real exact = oracle::gauss_by_solid_angle(fixture::points3(c), fixture::points3(path));
      CHECK(std::abs(g.value - exact) <= g.error_estimate);
      CHECK(g.error_estimate < 1e-2L);
    }
  }

  TEST_CASE("distant segments") {
    const Curve a = fixture::polyline({{0, 0, 0}, {1, 0, 0}});
    const Curve b = fixture::polyline({{0, 100, 0}, {0, 100, 1}});
    CHECK(std::abs(gauss_rotation_pair(a, b, RotationMode::signed_).value) < 1e-4L);
    CHECK(gauss_rotation_pair(a, b, RotationMode::absolute).value < 1e-4L);
  }

  TEST_CASE("off-axis twist trajectories do not rotate around each other") {
    const Scenario s = make_scenario("twist-pair");
    for (const RotationMode m : {RotationMode::signed_, RotationMode::absolute}) {
      const RotationResult g = gauss_rotation_pair(s.trajectories[0], s.trajectories[1], m);
      CHECK(std::abs(g.value) < 1e-4L);
      CHECK(std::abs(g.value) <= g.error_estimate + 1e-6L);
    }
  }

  TEST_CASE("Hopf pair links once") {
    const auto [a, b] = hopf_pair(1000);
    const LinkingResult l = linking_coefficient(a, b);
    CHECK(std::abs(l.nearest_integer) == 1);
    CHECK(l.residual < 0.02L);
    CHECK(l.nearest_integer == topological_linking_planar(a, b));
    const LinkingResult r = linking_coefficient(a, b.reversed());
    CHECK(r.nearest_integer == -l.nearest_integer);
    CHECK(std::abs(r.raw + l.raw) < 1e-9L);
  }

  TEST_CASE("disjoint coplanar circles do not link") {
    const Curve a = circle(Vector::Zero(3), Vector::Unit(3, 0), Vector::Unit(3, 1), 1, 400);
    const Curve b = circle(make_vector({3, 0, 0}), Vector::Unit(3, 0), Vector::Unit(3, 1), 1, 400);
    CHECK(linking_coefficient(a, b).nearest_integer == 0);
  }

  TEST_CASE("topological count") {
    const Curve disc = circle(Vector::Zero(3), Vector::Unit(3, 0), Vector::Unit(3, 1), 1, 200);
    const Curve above = circle(make_vector({0, 0, 1}), Vector::Unit(3, 0), Vector::Unit(3, 2), 0.5L, 100, 0.5L);
    CHECK(topological_linking_planar(disc, above) == 0);
    // Down through the disc and up again inside it.
    const Curve twice = circle(make_vector({0, 0, 0}), Vector::Unit(3, 0), Vector::Unit(3, 2), 0.5L, 100, 0.5L);
    CHECK(topological_linking_planar(disc, twice) == 0);
    const Curve line_up = fixture::polyline({{0.2L, 0, -1}, {0.2L, 0, 1}});
    CHECK(topological_linking_planar(disc, line_up) == 1);
  }

  TEST_CASE("topological count errors") {
    const Curve h = helix(1, 40);
    const Curve disc = circle(Vector::Zero(3), Vector::Unit(3, 0), Vector::Unit(3, 1), 1, 200);
    std::vector<Real> t(h.times());
    Matrix p = h.points();
    p.col(p.cols() - 1) = p.col(0);
    try {
      (void)topological_linking_planar(Curve(t, p, true), disc);
      FAIL("not planar accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotPlanar);
    }
    try {
      (void)topological_linking_planar(disc, fixture::polyline({{0, 0, -1}, {0, 0.5L, 0}, {0, 0, 1}}));
      FAIL("in-plane sample accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NonTransversal);
    }
  }

  TEST_CASE("linking errors") {
    const Curve disc = circle(Vector::Zero(3), Vector::Unit(3, 0), Vector::Unit(3, 1), 1, 200);
    try {
      (void)linking_coefficient(disc, axis_segment(2, 10));
      FAIL("open curve accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotClosed);
    }
    try {
      (void)linking_coefficient(disc, circle(make_vector({2, 0, 0}), Vector::Unit(3, 0), Vector::Unit(3, 2), 1, 200));
      FAIL("touching curves accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::CurvesTooClose);
    }
    try {
      (void)gauss_rotation_pair(unit_circle(10), unit_circle(10), RotationMode::signed_);
      FAIL("planar curves accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DimensionMismatch);
    }
  }

  TEST_CASE("helix line cross-check") {
    const LineCrosscheck x = line_rotation_crosscheck(helix(3, 200), kZAxis, 200);
    CHECK(std::abs(x.gauss.value - 3) < 5e-3L);
    CHECK(std::abs(x.projection.value - 3) < 5e-3L);
    CHECK(x.discrepancy() < 5e-3L);
    CHECK(x.discrepancy() <= x.tolerance());
  }

  TEST_CASE("planar curve beside the line") {
    const Curve c = fixture::polyline({{1, 0, -1}, {2, 0, 0}, {1.5L, 0, 1}, {3, 0, 2}});
    const LineCrosscheck x = line_rotation_crosscheck(c, kZAxis, 200);
    CHECK(std::abs(x.gauss.value) < 1e-6L);
    CHECK(std::abs(x.projection.value) < 1e-12L);
  }

  TEST_CASE("sink trajectory line cross-check") {
    const Curve c = sink_trajectory(make_vector({1, 1, 0}), 3);
    const LineCrosscheck x =
        line_rotation_crosscheck(c, AffineSubspace::line(Vector::Zero(3), Vector::Unit(3, 0)), 200);
    CHECK(x.discrepancy() < 5e-3L);
    CHECK(std::abs(std::abs(x.projection.value) - 6 / (2 * kPi)) < 1e-3L);
  }

  TEST_CASE("symmetry, domination and rigid motions") {
    const Scenario s = make_scenario("sink-pair");
    const Curve a = clip(s.trajectories[0], {0, 1.5L});
    const Curve b = clip(s.trajectories[1], {0, 1.5L});
    const RotationResult ab = gauss_rotation_pair(a, b, RotationMode::signed_);
    const RotationResult ba = gauss_rotation_pair(b, a, RotationMode::signed_);
    CHECK(std::abs(ab.value - ba.value) <= ab.error_estimate + ba.error_estimate);
    const RotationResult abs_ab = gauss_rotation_pair(a, b, RotationMode::absolute);
    const RotationResult abs_ba = gauss_rotation_pair(b, a, RotationMode::absolute);
    CHECK(std::abs(abs_ab.value - abs_ba.value) <= abs_ab.error_estimate + abs_ba.error_estimate);
    CHECK(std::abs(ab.value) <= abs_ab.value + 1e-15L);

    Rng rng(4);
    const Matrix Q = haar_orthogonal(rng, 3);
    const Vector shift = gaussian_vector(rng, 3);
    const Real sign = Q.determinant() > 0 ? 1 : -1;
    const RotationResult m =
        gauss_rotation_pair(fixture::moved(a, Q, shift), fixture::moved(b, Q, shift), RotationMode::signed_);
    CHECK(std::abs(sign * m.value - ab.value) < 1e-9L);
  }

  TEST_CASE("deformations with fixed end points keep the signed rotation") {
    const Curve c = circle(Vector::Zero(3), Vector::Unit(3, 0), Vector::Unit(3, 1), 1, 600);
    const RotationResult base = gauss_rotation_pair(c, deformed_path(0, 0, 200), RotationMode::signed_);
    for (int k = 0; k < 10; ++k) {
      const Curve path = deformed_path(0.05L + 0.08L * k, 0.7L * k, 200);
      REQUIRE(curve_distance(c, path) >= 0.1L);
      const RotationResult g = gauss_rotation_pair(c, path, RotationMode::signed_);
      CHECK(std::abs(g.value - base.value) <= g.error_estimate + base.error_estimate);
    }
  }

  TEST_CASE("additive over concatenation") {
    const Curve c = circle(Vector::Zero(3), Vector::Unit(3, 0), Vector::Unit(3, 1), 1, 300);
    const Curve path = deformed_path(0.5L, 0.3L, 200);
    const Curve p1 = clip(path, {0, 0.4L});
    const Curve p2 = clip(path, {0.4L, 1});
    const RotationResult whole = gauss_rotation_pair(c, concat(p1, p2), RotationMode::signed_);
    const RotationResult a = gauss_rotation_pair(c, p1, RotationMode::signed_);
    const RotationResult b = gauss_rotation_pair(c, p2, RotationMode::signed_);
    CHECK(std::abs(whole.value - a.value - b.value) <= whole.error_estimate + a.error_estimate + b.error_estimate);
  }

  TEST_CASE("curve distance") {
    const Curve a = fixture::polyline({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}});
    const Curve b = fixture::polyline({{0.5L, 1, -1}, {0.5L, 1, 1}});
    CHECK(curve_distance(a, b) == doctest::Approx(1));
  }
}
