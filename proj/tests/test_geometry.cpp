#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "gapfield/geometry.hpp"

using namespace gapfield;

namespace {

LatVec lat2(double a, double b) {
  LatVec v(2);
  v << a, b;
  return v;
}

LatVec lat1(double a) {
  LatVec v(1);
  v << a;
  return v;
}

}  // namespace

TEST_CASE("profiles vanish to second order at the origin, analytically") {
  const auto f = InclusionProfile::ball(1.0, Orientation::Upper, 2);
  const LatVec zero = LatVec::Zero(2);
  CHECK(f.value(zero) == 0.0);
  CHECK(f.gradient(zero).norm() == 0.0);

  LatMat Q(2, 2);
  Q << 2.0, 0.5, 0.5, 1.0;
  const auto q = InclusionProfile::quadratic(Q, Orientation::Upper);
  CHECK(q.value(zero) == 0.0);
  CHECK(q.gradient(zero).norm() == 0.0);

  const auto m =
      InclusionProfile::monomial_sum({0.5, 0.25}, Orientation::Upper, 2);
  CHECK(m.value(zero) == 0.0);
  CHECK(m.gradient(zero).norm() == 0.0);
}

TEST_CASE("gap height closed forms") {
  const GapGeometry balls = GapGeometry::unit_balls(0.01, 0.8, 3);
  CHECK(balls.gap_height(LatVec::Zero(2)) == doctest::Approx(0.01).epsilon(1e-14));
  // f - g = 2 (1 - sqrt(1 - 0.36)) = 0.4 at |x'| = 0.6
  CHECK(balls.gap_height(lat2(0.6, 0.0)) ==
        doctest::Approx(0.41).epsilon(1e-14));

  const GapGeometry quad =
      GapGeometry::quadratic_pair(LatMat::Identity(2, 2), 0.02, 0.8, 3);
  CHECK(quad.gap_height(lat2(0.1, 0.1)) ==
        doctest::Approx(0.04).epsilon(1e-14));

  CHECK_THROWS_AS(balls.gap_height(lat2(0.9, 0.0)), DomainError);
}

TEST_CASE("delta scale") {
  const GapGeometry g1 = GapGeometry::unit_balls(0.01, 0.8, 3);
  CHECK(g1.delta_scale(LatVec::Zero(2)) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(g1.delta_scale(lat2(0.1, 0.0)) ==
        doctest::Approx(std::sqrt(0.02)).epsilon(1e-14));
  // pure Euclidean norm as epsilon -> 0 (epsilon = 0 itself is rejected,
  // so probe the formula at a tiny epsilon)
  const GapGeometry g2 = GapGeometry::unit_balls(1e-30, 0.8, 3);
  CHECK(g2.delta_scale(lat2(0.15, 0.08)) ==
        doctest::Approx(0.17).epsilon(1e-12));

  SUBCASE("monotone in |x0'| and in epsilon") {
    const GapGeometry a = GapGeometry::unit_balls(1e-3, 0.8, 3);
    const GapGeometry b = GapGeometry::unit_balls(2e-3, 0.8, 3);
    double prev = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double r = 0.79 * i / 19.0;
      const double da = a.delta_scale(lat2(r, 0.0));
      CHECK(da >= prev);
      CHECK(b.delta_scale(lat2(r, 0.0)) > da);
      prev = da;
    }
  }
}

TEST_CASE("retracted gap height") {
  // quadratic Q=I: retracted point (0.01 - 0.05, 0), f - g = 0.0016
  const GapGeometry quad =
      GapGeometry::quadratic_pair(LatMat::Identity(2, 2), 0.01, 0.8, 3);
  CHECK(quad.retracted_gap_height(lat2(0.01, 0.0), 0.2) ==
        doctest::Approx(0.0116).epsilon(1e-14));

  // unit balls: 0.01 + 2 (1 - sqrt(1 - 0.0016)); reference value computed
  // with 40-digit arithmetic
  const GapGeometry balls = GapGeometry::unit_balls(0.01, 0.8, 3);
  CHECK(balls.retracted_gap_height(lat2(0.01, 0.0), 0.2) ==
        doctest::Approx(0.011600640512512574).epsilon(1e-14));

  SUBCASE("x0' -> 0 limit matches the e1 convention") {
    const double at_zero = balls.retracted_gap_height(LatVec::Zero(2), 0.2);
    const double near_zero =
        balls.retracted_gap_height(lat2(1e-9, 0.0), 0.2);
    CHECK(at_zero == doctest::Approx(balls.gap_height(lat2(-0.05, 0.0)))
                         .epsilon(1e-14));
    CHECK(near_zero == doctest::Approx(at_zero).epsilon(1e-6));
  }
}

TEST_CASE("relative convexity verification") {
  const GapGeometry quad =
      GapGeometry::quadratic_pair(LatMat::Identity(2, 2), 0.01, 0.8, 3);
  const auto rep = quad.verify_relative_convexity(200);
  CHECK(rep.min_eig == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(rep.pass);

  SUBCASE("unit balls at R0 = 0.5: minimum at the origin") {
    const GapGeometry balls = GapGeometry::unit_balls(0.01, 0.5, 3);
    const auto r = balls.verify_relative_convexity(4000);
    // dense-sampling oracle: min eigenvalue of the Hessian of f - g over the
    // disk; both curvatures grow away from 0, so the minimum is 2 at x' = 0
    CHECK(r.min_eig == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(r.worst_point.norm() < 0.05);
    CHECK(r.pass);
  }

  SUBCASE("kappa larger than the actual curvature fails") {
    const GapGeometry hard(
        InclusionProfile::quadratic(LatMat::Identity(2, 2), Orientation::Upper),
        InclusionProfile::quadratic(LatMat::Identity(2, 2), Orientation::Lower),
        0.01, 0.8, 3.0, 3);
    const auto r = hard.verify_relative_convexity(100);
    CHECK(r.min_eig == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_FALSE(r.pass);
  }

  CHECK_THROWS_AS(quad.verify_relative_convexity(5), DomainError);
}

TEST_CASE("boundary normals") {
  const GapGeometry balls = GapGeometry::unit_balls(0.01, 0.8, 3);
  const VecN at0 = balls.boundary_normal(LatVec::Zero(2), Orientation::Upper);
  CHECK(at0[0] == 0.0);
  CHECK(at0[1] == 0.0);
  CHECK(at0[2] == 1.0);

  // f = |x'|^2 is the quadratic profile with Q = 2I
  const GapGeometry quad =
      GapGeometry::quadratic_pair(2.0 * LatMat::Identity(2, 2), 0.01, 0.8, 3);
  const VecN up = quad.boundary_normal(lat2(0.1, 0.0), Orientation::Upper);
  const double nrm = std::sqrt(1.04);
  CHECK(up[0] == doctest::Approx(-0.2 / nrm).epsilon(1e-14));
  CHECK(up[1] == doctest::Approx(0.0));
  CHECK(up[2] == doctest::Approx(1.0 / nrm).epsilon(1e-14));

  const VecN lo = quad.boundary_normal(lat2(0.1, 0.0), Orientation::Lower);
  CHECK(lo[0] == doctest::Approx(-0.2 / nrm).epsilon(1e-14));
  CHECK(lo[2] == doctest::Approx(-1.0 / nrm).epsilon(1e-14));

  SUBCASE("unit length and tangency") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int it = 0; it < 100; ++it) {
      const LatVec xp = lat2(u(rng), u(rng));
      for (const auto side : {Orientation::Upper, Orientation::Lower}) {
        const VecN nu = balls.boundary_normal(xp, side);
        CHECK(std::abs(nu.norm() - 1.0) <= 1e-14);
        const LatVec grad = side == Orientation::Upper
                                ? balls.upper().gradient(xp)
                                : balls.lower().gradient(xp);
        for (int i = 0; i < 2; ++i) {
          VecN tangent = VecN::Zero(3);
          tangent[i] = 1.0;
          tangent[2] = grad[i];
          CHECK(std::abs(nu.dot(tangent)) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("gap height bounds on dense samples") {
  const GapGeometry balls = GapGeometry::unit_balls(1e-3, 0.8, 3);
  // sandwich kappa |x'|^2 / 2 <= gap - eps <= C_f |x'|^2 with C_f from the
  // max sampled Hessian eigenvalue
  double cf = 0.0;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.56, 0.56);
  std::vector<LatVec> pts;
  for (int it = 0; it < 500; ++it) {
    const LatVec xp = lat2(u(rng), u(rng));
    if (xp.norm() >= 0.79) continue;
    pts.push_back(xp);
    const LatMat H =
        balls.upper().hessian(xp) - balls.lower().hessian(xp);
    Eigen::SelfAdjointEigenSolver<LatMat> es(H);
    cf = std::max(cf, es.eigenvalues().maxCoeff());
  }
  cf = 0.5 * cf * (1.0 + 1e-6);
  for (const LatVec& xp : pts) {
    const double gh = balls.gap_height(xp);
    CHECK(gh >= 1e-3);
    const double excess = gh - 1e-3;
    CHECK(excess >= 0.5 * balls.kappa() * xp.squaredNorm() * (1.0 - 1e-12));
    CHECK(excess <= cf * xp.squaredNorm() * (1.0 + 1e-12));
  }
}

TEST_CASE("gap subdomain membership") {
  const GapGeometry balls = GapGeometry::unit_balls(0.01, 0.8, 3);
  const GapSubdomain omega(balls, lat2(0.1, 0.0), 0.2);
  CHECK(omega.contains_lateral(lat2(0.1, 0.05)));
  CHECK_FALSE(omega.contains_lateral(lat2(0.4, 0.0)));
  CHECK(omega.in_annulus(lat2(0.25, 0.0)));
  CHECK_FALSE(omega.in_annulus(lat2(0.15, 0.0)));
  CHECK_THROWS_AS(GapSubdomain(balls, lat2(0.0, 0.0), 0.9), DomainError);
}

TEST_CASE("construction guards") {
  CHECK_THROWS_AS(GapGeometry::unit_balls(-1.0, 0.8, 3), DomainError);
  CHECK_THROWS_AS(GapGeometry::unit_balls(0.01, 0.8, 4), DomainError);
  // epsilon must not exceed r0^2 = (R0/4)^2
  CHECK_THROWS_AS(GapGeometry::unit_balls(0.05, 0.8, 3), DomainError);
  LatMat bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;  // indefinite
  CHECK_THROWS_AS(InclusionProfile::quadratic(bad, Orientation::Upper),
                  DomainError);
}
