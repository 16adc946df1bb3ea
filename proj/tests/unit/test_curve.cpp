#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "rotlip/error.hpp"
#include "rotlip/flow.hpp"
#include "rotlip/rotation.hpp"
#include "rotlip/scenarios.hpp"

using namespace rotlip;

TEST_SUITE("curve") {
  TEST_CASE("constructor validation") {
    CHECK_THROWS_AS(Curve({0}, Matrix::Zero(2, 1)), Error);
    CHECK_THROWS_AS(Curve({0, 0}, Matrix::Zero(2, 2)), Error);
    CHECK_THROWS_AS(Curve({1, 0}, Matrix::Zero(2, 2)), Error);
    Matrix p(2, 2);
    p << 0, 1, 0, 0;
    try {
      Curve({0, 1}, p, true);
      FAIL("open ends accepted as closed");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidCurve);
    }
    p(0, 1) = std::nan("");
    CHECK_THROWS_AS(Curve({0, 1}, p), Error);
  }

  TEST_CASE("length of a segment") {
    CHECK(curve_length(fixture::polyline({{0, 0}, {3, 4}})) == doctest::Approx(5).epsilon(1e-15));
  }

  TEST_CASE("length of a sampled unit circle") {
    CHECK(std::abs(curve_length(unit_circle(1000)) - 2 * kPi) < 1e-4L);
  }

  TEST_CASE("twist trajectory length survives 10x finer sampling") {
    // x1 runs from 0.1 to 0.5 at unit speed.
    const Curve coarse = twist_trajectory(0.1L, 0.5L);
    IntegratorConfig fine = twist_config();
    fine.max_step /= 10;
    const Vector w = twist_offset(0.1L);
    const Curve ref = integrate_trajectory(FieldSpec::twist3d(), make_vector({0.1L, w[0], w[1]}), 0, 0.4L, fine);
    CHECK(ref.duration() / static_cast<Real>(ref.segment_count()) <= 1e-4L);
    const Real a = curve_length(coarse);
    const Real b = curve_length(ref);
    CHECK(std::abs(a - b) / b < 1e-3L);
  }

  TEST_CASE("length is additive over concatenation") {
    const Curve c = helix(2, 100);
    const Curve a = clip(c, {0, 5});
    const Curve b = clip(c, {5, c.t_end()});
    const Real whole = curve_length(concat(a, b));
    CHECK(std::abs(whole - (curve_length(a) + curve_length(b))) <= 1e-15L * whole);
  }

  TEST_CASE("blow-up of a radial segment is a single point") {
    const SphericalCurve s = spherical_blowup(fixture::polyline({{1, 0}, {1.5L, 0}, {2, 0}}), Vector::Zero(2));
    for (Eigen::Index i = 0; i < s.curve().size(); ++i) {
      CHECK(std::abs(s.curve().point(i)(0) - 1) < 1e-15L);
      CHECK(std::abs(s.curve().point(i)(1)) < 1e-15L);
    }
    CHECK(s.length() == 0);
  }

  TEST_CASE("blow-up of the unit circle is the circle") {
    const Curve c = unit_circle(64);
    const SphericalCurve s = spherical_blowup(c, Vector::Zero(2));
    CHECK((s.curve().points() - c.points()).cwiseAbs().maxCoeff() < 1e-15L);
  }

  TEST_CASE("blow-up samples have unit norm") {
    const Curve c = sink_trajectory(make_vector({1, 1, 0}), 3);
    const SphericalCurve s = spherical_blowup(c, make_vector({0.2L, 0.3L, -0.1L}));
    for (Eigen::Index i = 0; i < s.curve().size(); ++i) CHECK(std::abs(s.curve().point(i).norm() - 1) < 1e-9L);
  }

  TEST_CASE("spiral blow-up moves at unit angular speed") {
    // Remark on the algebraic spiral field: the blow-up velocity is the unit normal.
    for (const Real r0 : {0.2L, 0.5L, 0.9L}) {
      const Curve c = spiral_trajectory(10, make_vector({r0, 0}));
      const SphericalCurve s = spherical_blowup(c, Vector::Zero(2));
      CHECK(std::abs(s.length() - 10) / 10 < 1e-3L);
    }
  }

  TEST_CASE("blow-up guard") {
    const Curve c = fixture::polyline({{-1, 0}, {0, 0}, {1, 0}});
    try {
      (void)spherical_blowup(c, Vector::Zero(2));
      FAIL("no guard");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DistanceTooSmall);
    }
    CHECK_NOTHROW((void)spherical_blowup(c, make_vector({0, 1e-3L})));
  }

  TEST_CASE("helix projects to the unit circle") {
    const Curve h = helix(2, 50, 1);
    const Curve p = project_to_complement(h, AffineSubspace::line(Vector::Zero(3), Vector::Unit(3, 2)));
    REQUIRE(p.dim() == 2);
    for (Eigen::Index i = 0; i < p.size(); ++i) CHECK(std::abs(p.point(i).norm() - 1) < 1e-15L);
  }

  TEST_CASE("curve inside the subspace projects to the origin") {
    const Curve c = fixture::polyline({{0, 0, 1}, {0, 0, 2}, {0, 0, 5}});
    const Curve p = project_to_complement(c, AffineSubspace::line(Vector::Zero(3), Vector::Unit(3, 2)));
    CHECK(p.points().cwiseAbs().maxCoeff() == 0);
    try {
      (void)rotation_around_subspace(c, AffineSubspace::line(Vector::Zero(3), Vector::Unit(3, 2)),
                                     RotationMode::absolute);
      FAIL("no guard");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DistanceTooSmall);
    }
  }

  TEST_CASE("projected twist trajectory has polar angle 1/x1") {
    const Curve c = twist_trajectory(0.1L, 0.3L);
    const Curve p = project_to_complement(c, AffineSubspace::line(Vector::Zero(3), Vector::Unit(3, 0)));
    for (Eigen::Index i = 0; i < c.size(); i += 37) {
      const Real x1 = c.point(i)(0);
      const Real phi = std::atan2(p.point(i)(1), p.point(i)(0));
      const Real expected = std::remainder(1 / x1, 2 * kPi);
      CHECK(std::abs(std::remainder(phi - expected, 2 * kPi)) < 1e-6L);
    }
  }

  TEST_CASE("projection is idempotent") {
    Rng rng(7);
    const Matrix Q = haar_orthogonal(rng, 4);
    const AffineSubspace L = AffineSubspace::spanned(make_vector({1, 2, 3, 4}), {Vector(Q.col(0))});
    Matrix pts(4, 20);
    for (int j = 0; j < 20; ++j) pts.col(j) = gaussian_vector(rng, 4);
    std::vector<Real> t(20);
    for (int j = 0; j < 20; ++j) t[static_cast<std::size_t>(j)] = j;
    const Curve c(t, pts);
    const Curve once = project_to_complement(c, L);
    // In the complement coordinates the subspace is the origin.
    const Curve twice = project_to_complement(once, AffineSubspace::point(Vector::Zero(3)));
    CHECK((once.points() - twice.points()).cwiseAbs().maxCoeff() < 1e-12L);
    // Projecting the lifted curve again reproduces it.
    Matrix lifted = (L.complement_basis() * once.points()).colwise() + L.base();
    const Curve again = project_to_complement(Curve(t, lifted), L);
    CHECK((once.points() - again.points()).cwiseAbs().maxCoeff() < 1e-12L);
  }

  TEST_CASE("resample a segment") {
    const Curve r = resample(fixture::polyline({{0, 0}, {4, 0}}), 5);
    REQUIRE(r.size() == 5);
    for (Eigen::Index i = 0; i < 5; ++i) {
      CHECK(std::abs(r.point(i)(0) - static_cast<Real>(i)) < 1e-15L);
      CHECK(r.point(i)(1) == 0);
    }
  }

  TEST_CASE("resample keeps circle length") {
    const Curve c = unit_circle(1000);
    CHECK(std::abs(curve_length(resample(c, 500)) - curve_length(c)) < 1e-3L);
  }

  TEST_CASE("resampling the spiral moves its rotation by less than the error estimates") {
    const Curve c = spiral_trajectory(10);
    const RotationResult a = absolute_rotation_point(c, Vector::Zero(2));
    for (const Eigen::Index n : {c.size() / 2, c.size(), 2 * c.size()}) {
      const RotationResult b = absolute_rotation_point(resample(c, n), Vector::Zero(2));
      CHECK(std::abs(a.value - b.value) <= a.error_estimate + b.error_estimate);
    }
  }

  TEST_CASE("affine subspace") {
    CHECK_THROWS_AS(AffineSubspace(Vector::Zero(3), (Matrix(3, 2) << 1, 1, 0, 0, 0, 0).finished()), Error);
    const AffineSubspace L = AffineSubspace::line(make_vector({0, 0, 1}), make_vector({0, 0, 2}));
    CHECK(L.codim() == 2);
    CHECK(L.distance(make_vector({3, 4, 9})) == doctest::Approx(5));
    const Matrix q = L.complement_basis();
    CHECK((q.transpose() * q - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15L);
    CHECK((q.transpose() * L.basis()).cwiseAbs().maxCoeff() < 1e-15L);
  }

  TEST_CASE("closed curves snap their end point") {
    Matrix p(2, 4);
    p << 1, 0, -1, 1 + 1e-9L, 0, 1, 0, 0;
    const Curve c({0, 1, 2, 3}, p, true);
    CHECK(c.point(3) == c.point(0));
  }
}
