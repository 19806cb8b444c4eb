#include "doctest.h"

#include <cmath>

#include "cct/ds_domains.hpp"
#include "cct/rng.hpp"
#include "oracles.hpp"

using namespace cct;

namespace {

DsBoundarySet antipodal_marks(int n) {
  Vec q = Vec::Zero(n);
  q[0] = 1.0;
  return DsBoundarySet(n, {q, Vec(-q)});
}

}  // namespace

TEST_CASE("ds_domains: ball of a dS_2 point") {
  Vec x(3);
  x << 0.0, 0.0, -1.0;
  const RoundBall ball = ball_of_point(DsPoint(x));
  CHECK(ball.radius == doctest::Approx(M_PI / 2));
  CHECK(ball.center[0] == doctest::Approx(0.0));
  CHECK(ball.center[1] == doctest::Approx(-1.0));
  // future endpoints of geodesics from x are (1, tanh u, -sech u): the open
  // lower half circle
  for (const double u : {-2.0, -0.5, 0.0, 0.7, 2.5}) {
    Vec q(2);
    q << std::tanh(u), -1.0 / std::cosh(u);
    CHECK(sphere_distance(q, ball.center) < ball.radius + 1e-12);
  }
}

TEST_CASE("ds_domains: ball correspondence is monotone and bijective") {
  Rng rng(131);
  for (int k = 0; k < 100; ++k) {
    Vec c = rng.unit_vector(3);
    const double r = rng.uniform(0.05, M_PI - 0.05);
    const DsPoint x = point_of_ball({c, r});
    CHECK(std::abs(qnorm(x.x, 1) - 1.0) < 1e-9);
    const RoundBall back = ball_of_point(x);
    CHECK((back.center - c).norm() < 1e-8);
    CHECK(back.radius == doctest::Approx(r).epsilon(1e-8));

    // future translation shrinks the ball
    Vec et = Vec::Zero(4);
    et[0] = 1.0;
    et -= qdot(et, x.x, 1) * x.x;
    et /= std::sqrt(-qnorm(et, 1));
    if (!is_future_ds(et)) et = -et;
    const DsPoint y(ds_exp_timelike(x.x, et, rng.uniform(0.1, 1.0)));
    const RoundBall smaller = ball_of_point(y);
    // containment: every boundary direction of the smaller cap is inside
    CHECK(sphere_distance(smaller.center, back.center) + smaller.radius < back.radius + 1e-9);

    // antipodal flip gives the complementary ball
    const RoundBall flip = ball_of_point(DsPoint(Vec(-x.x)));
    CHECK((flip.center + back.center).norm() < 1e-9);
    CHECK(flip.radius == doctest::Approx(M_PI - back.radius).epsilon(1e-9));
  }
}

TEST_CASE("ds_domains: membership") {
  const DsBoundarySet bs = antipodal_marks(3);
  SUBCASE("points just future of the core sphere are inside") {
    // core Q = span(u1,u2)^perp intersected with the quadric
    Vec y = Vec::Zero(4);
    y[2] = 1.0;  // on Q
    Vec w = Vec::Zero(4);
    w[0] = 1.0;  // future timelike in span(u1,u2)
    const DsPoint x(ds_exp_timelike(y, w, 0.7));
    CHECK(contains_ds(bs, x));
    CHECK_FALSE(contains_ds(bs, DsPoint(y)));  // on the horizon edge itself
  }
  SUBCASE("horizon points are excluded (strictness)") {
    // <x|u1> = 0 exactly
    Rng rng(137);
    for (int k = 0; k < 20; ++k) {
      Vec c = (bs.marks()[0] + 0.3 * rng.unit_vector(3)).normalized();
      const double r = sphere_distance(c, bs.marks()[0]);
      if (r < 0.05 || r > M_PI - 0.05) continue;
      const DsPoint z = point_of_ball({c, r});  // mark on the cap boundary
      CHECK(std::abs(qdot(z.x, bs.null_lifts()[0], 1)) < 1e-9);
      CHECK_FALSE(contains_ds(bs, z));
    }
  }
  SUBCASE("causal future stays inside") {
    Rng rng(139);
    const DsBoundarySet marks = oracles::random_ds_boundary(3, 4, rng);
    for (int k = 0; k < 50; ++k) {
      const DsPoint x = oracles::random_interior_point_ds(marks, rng);
      REQUIRE(contains_ds(marks, x));
      Vec et = Vec::Zero(4);
      et[0] = 1.0;
      et -= qdot(et, x.x, 1) * x.x;
      et /= std::sqrt(-qnorm(et, 1));
      if (!is_future_ds(et)) et = -et;
      // random future timelike direction
      const auto frame = spacelike_complement_frame({x.x, et}, 1, 2);
      const double boost = rng.uniform(0.0, 1.5);
      Vec v = std::cosh(boost) * et;
      const Vec dir = rng.unit_vector(2);
      for (int i = 0; i < 2; ++i) v += std::sinh(boost) * dir[i] * frame[i];
      const DsPoint y(ds_exp_timelike(x.x, v, rng.uniform(0.05, 2.0)));
      CHECK(contains_ds(marks, y));
    }
  }
}

TEST_CASE("ds_domains: duality against convex combinations") {
  Rng rng(149);
  const DsBoundarySet bs = oracles::random_ds_boundary(3, 5, rng);
  for (int k = 0; k < 50; ++k) {
    const DsPoint x = oracles::random_interior_point_ds(bs, rng);
    Vec weights(5);
    for (int i = 0; i < 5; ++i) weights[i] = rng.uniform(0, 1);
    weights /= weights.sum();
    Vec combo = Vec::Zero(4);
    for (int i = 0; i < 5; ++i) combo += weights[i] * bs.null_lifts()[i];
    CHECK(qdot(x.x, combo, 1) < 0.0);
  }
}

TEST_CASE("ds_domains: lorentz distance") {
  Rng rng(151);
  Vec x0 = Vec::Zero(4);
  x0[3] = 1.0;
  const DsPoint x(x0);
  CHECK(lorentz_distance_ds(x, x) == 0.0);
  Vec v = Vec::Zero(4);
  v[0] = 1.0;  // future unit timelike orthogonal to x
  for (const double a : {0.5, 1.0, 2.0}) {
    const DsPoint y(ds_exp_timelike(x.x, v, a));
    CHECK(lorentz_distance_ds(x, y) == doctest::Approx(a).epsilon(1e-12));
  }
  SUBCASE("spacelike pairs give zero") {
    Vec w = Vec::Zero(4);
    w[1] = 1.0;
    const DsPoint y(ds_exp_spacelike(x.x, w, 0.8));
    CHECK(qdot(x.x, y.x, 1) < 1.0);
    CHECK(lorentz_distance_ds(x, y) == 0.0);
  }
}

TEST_CASE("ds_domains: cosmological time of the two-mark domain") {
  const DsBoundarySet bs = antipodal_marks(3);
  SUBCASE("closed form along the core normal") {
    Vec y = Vec::Zero(4);
    y[2] = 1.0;
    Vec w = Vec::Zero(4);
    w[0] = 1.0;
    for (const double a : {0.4, 1.0, 1.8}) {
      const DsPoint x(ds_exp_timelike(y, w, a));
      CHECK(cosmological_time_ds(bs, x) == doctest::Approx(a).epsilon(1e-7));
      CHECK(two_mark_tau(bs, x) == doctest::Approx(a).epsilon(1e-12));
    }
  }
  SUBCASE("numeric tau equals the closed form at random interior points") {
    Rng rng(157);
    for (const int n : {3, 4}) {
      const DsBoundarySet marks = antipodal_marks(n);
      for (int k = 0; k < 100; ++k) {
        const DsPoint x = oracles::random_interior_point_ds(marks, rng, 0.2, 0.9);
        const double tau = cosmological_time_ds(marks, x);
        CHECK(std::abs(tau - two_mark_tau(marks, x)) < 1e-5);
      }
    }
  }
  SUBCASE("tau tends to zero toward the horizon") {
    Vec y = Vec::Zero(4);
    y[2] = 1.0;
    Vec w = Vec::Zero(4);
    w[0] = 1.0;
    double prev = 1e9;
    for (const double a : {0.5, 0.2, 0.05, 0.01}) {
      const DsPoint x(ds_exp_timelike(y, w, a));
      const double tau = cosmological_time_ds(bs, x);
      CHECK(tau == doctest::Approx(a).epsilon(1e-6));
      CHECK(tau < prev);
      prev = tau;
    }
  }
}

TEST_CASE("ds_domains: production tau matches the fan and enumeration oracles") {
  Rng rng(163);
  const DsBoundarySet bs = oracles::random_ds_boundary(3, 4, rng);
  for (int k = 0; k < 30; ++k) {
    const DsPoint x = oracles::random_interior_point_ds(bs, rng);
    const double tau = cosmological_time_ds(bs, x);
    const double fan = oracles::ds_fan_tau(bs, x.x, 10000, 2000 + k);
    CHECK(tau >= fan - 1e-9);
    CHECK(std::abs(tau - fan) < 2e-3);
    const double subset = oracles::ds_subset_tau(bs, x.x);
    if (subset > 0.0) CHECK(tau == doctest::Approx(subset).epsilon(1e-7));
  }
}

TEST_CASE("ds_domains: realizing feet are unique and lie in the support cone") {
  Rng rng(167);
  for (const int n : {3, 4}) {
    const DsBoundarySet bs = oracles::random_ds_boundary(n, 4, rng);
    int done = 0;
    for (int k = 0; k < 100 && done < 25; ++k) {
      const DsPoint x = oracles::random_interior_point_ds(bs, rng);
      RealizingGeodesicDs rg;
      try {
        rg = realizing_geodesic_ds(bs, x);
      } catch (const std::domain_error&) {
        continue;
      }
      ++done;
      REQUIRE(!rg.active_set.empty());
      // direction is a nonnegative combination of the active null lifts
      Eigen::MatrixXd span(n + 1, rg.active_set.size());
      for (size_t i = 0; i < rg.active_set.size(); ++i)
        span.col(i) = bs.null_lifts()[rg.active_set[i]];
      const Eigen::VectorXd coef = span.colPivHouseholderQr().solve(rg.direction);
      CHECK((span * coef - rg.direction).norm() < 1e-6);
      for (int i = 0; i < coef.size(); ++i) CHECK(coef[i] > -1e-6);
      const Vec y = ds_exp_timelike(rg.foot, rg.direction, rg.length);
      CHECK((y - x.x).norm() < 1e-7);
    }
    CHECK(done == 25);
  }
}

TEST_CASE("ds_domains: level samples sit on the level") {
  Rng rng(173);
  const DsBoundarySet bs = oracles::random_ds_boundary(3, 3, rng);
  for (const double a : {0.3, 1.0, 2.0}) {
    const auto samples = level_sample_ds(bs, a, 16, 31337);
    for (const auto& s : samples) {
      CHECK(std::abs(cosmological_time_ds(bs, DsPoint(s.point)) - a) <= 1e-5);
      CHECK(std::abs(qnorm(s.normal, 1) + 1.0) < 1e-9);
      CHECK(is_future_ds(s.normal));
    }
  }
}

TEST_CASE("ds_domains: constructor rejections") {
  Vec q = Vec::Zero(3);
  q[0] = 1.0;
  CHECK_THROWS_AS(DsBoundarySet(3, {q}), std::invalid_argument);        // one mark
  CHECK_THROWS_AS(DsBoundarySet(3, {q, q}), std::invalid_argument);     // coincident
  CHECK_THROWS_AS(DsBoundarySet(3, {q, 2.0 * q}), std::invalid_argument);  // not unit
}

TEST_CASE("ds_domains: json round trip") {
  Rng rng(179);
  const DsBoundarySet bs = oracles::random_ds_boundary(4, 5, rng);
  const DsBoundarySet back = ds_boundary_from_json(ds_boundary_to_json(bs));
  REQUIRE(back.marks().size() == bs.marks().size());
  CHECK(back.n() == bs.n());
  for (size_t i = 0; i < bs.marks().size(); ++i)
    CHECK((back.marks()[i] - bs.marks()[i]).norm() < 1e-15);
}
