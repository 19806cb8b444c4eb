#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cct/ads_cosmo_time.hpp"
#include "cct/rng.hpp"
#include "oracles.hpp"

using namespace cct;

namespace {

// point of the equatorial (fuchsian) domain at cosmological time a
AdsLinearPoint fuchsian_point(double a) {
  Vec x = Vec::Zero(4);
  x[0] = std::sin(a);
  x[1] = -std::cos(a);
  return AdsLinearPoint(x);
}

}  // namespace

TEST_CASE("ads_cosmo_time: fuchsian closed form tau = a") {
  const AdsDomain dom(oracles::equatorial_data(3, 48));
  for (const double a : {0.3, 0.7, 1.2}) {
    CHECK(cosmological_time(dom, fuchsian_point(a)) == doctest::Approx(a).epsilon(1e-9));
  }
}

TEST_CASE("ads_cosmo_time: outside point is rejected") {
  const AdsDomain dom(oracles::equatorial_data(3, 48));
  Vec y = Vec::Zero(4);
  y[0] = std::cos(2.0);  // conformal time 2.0 > pi/2 = f^+(north)
  y[1] = std::sin(2.0);
  CHECK_THROWS_AS(cosmological_time(dom, AdsLinearPoint(y)), std::domain_error);
}

TEST_CASE("ads_cosmo_time: tau tends to zero toward the horizon foot") {
  const AdsDomain dom(oracles::equatorial_data(3, 48));
  const auto rg = realizing_geodesic(dom, fuchsian_point(0.9));
  double prev = 1e9;
  for (const double s : {0.5, 0.2, 0.08, 0.02}) {
    const Vec y = ads_exp_timelike(rg.foot_linear, rg.direction, s);
    const double tau = cosmological_time(dom, AdsLinearPoint(y));
    CHECK(tau == doctest::Approx(s).epsilon(1e-6));
    CHECK(tau < prev);
    prev = tau;
  }
}

TEST_CASE("ads_cosmo_time: tau is the arc length along a realizing geodesic") {
  Rng rng(97);
  const AdsDomain dom(oracles::random_achronal_data(3, 5, rng));
  for (int k = 0; k < 10; ++k) {
    const AdsLinearPoint x = oracles::random_interior_point(dom, rng);
    RealizingGeodesic rg;
    try {
      rg = realizing_geodesic(dom, x);
    } catch (const std::domain_error&) {
      continue;  // tau outside (0, pi/2)
    } catch (const UniquenessViolation&) {
      continue;  // outside the tight region
    }
    for (double s = 0.2 * rg.length; s < rg.length; s += 0.2 * rg.length) {
      const Vec y = ads_exp_timelike(rg.foot_linear, rg.direction, s);
      CHECK(cosmological_time(dom, AdsLinearPoint(y)) == doctest::Approx(s).epsilon(1e-6));
    }
  }
}

TEST_CASE("ads_cosmo_time: tau strictly increases along future timelike curves") {
  const AdsDomain dom(oracles::equatorial_data(3, 48));
  Rng rng(101);
  for (int k = 0; k < 10; ++k) {
    const AdsLinearPoint x = oracles::random_interior_point(dom, rng, 0.2, 0.4);
    const Vec et = ads_future_unit(x.x);
    double prev = -1.0;
    for (double s = 0.0; s < 0.5; s += 0.1) {
      const Vec y = ads_exp_timelike(x.x, et, s);
      if (!dom.contains_klein(AdsLinearPoint(y))) break;
      const double tau = cosmological_time(dom, AdsLinearPoint(y));
      CHECK(tau > prev);
      prev = tau;
    }
    CHECK(prev > 0.0);
  }
}

TEST_CASE("ads_cosmo_time: production tau matches the geodesic-fan oracle") {
  Rng rng(103);
  const AdsDomain dom(oracles::random_achronal_data(3, 5, rng));
  int checked = 0;
  for (int k = 0; k < 50; ++k) {
    double tau = 0.0;
    const AdsLinearPoint x = oracles::random_tight_point(dom, rng, &tau);
    const double fan = oracles::ads_fan_tau(dom, x.x, 10000, 1000 + k);
    CHECK(tau >= fan - 1e-9);  // the fan is a lower bound
    CHECK(std::abs(tau - fan) < 2e-3);
    ++checked;
  }
  CHECK(checked == 50);
}

TEST_CASE("ads_cosmo_time: production tau matches the active-set enumeration oracle") {
  Rng rng(107);
  for (const int n : {3, 4}) {
    const AdsDomain dom(oracles::random_achronal_data(n, 6, rng));
    for (int k = 0; k < 25; ++k) {
      double tau = 0.0;
      const AdsLinearPoint x = oracles::random_tight_point(dom, rng, &tau, 1.5);
      const double subset = oracles::ads_subset_tau(dom, x.x);
      // in the tight region the maximum is attained at a stationary foot
      if (subset > 0.0 && tau < M_PI / 2 - 0.05)
        CHECK(tau == doctest::Approx(subset).epsilon(1e-7));
    }
  }
}

TEST_CASE("ads_cosmo_time: realizing geodesic of the fuchsian domain") {
  const AdsDomain dom(oracles::equatorial_data(3, 48));
  const auto rg = realizing_geodesic(dom, fuchsian_point(0.7));
  SUBCASE("foot is the past center") {
    Vec center = Vec::Zero(4);
    center[1] = -1.0;
    CHECK((rg.foot_linear - center).norm() < 1e-6);
    CHECK(rg.length == doctest::Approx(0.7).epsilon(1e-9));
  }
  SUBCASE("geodesic endpoint reproduces x") {
    const Vec y = ads_exp_timelike(rg.foot_linear, rg.direction, rg.length);
    CHECK((y - fuchsian_point(0.7).x).norm() < 1e-7);
  }
}

TEST_CASE("ads_cosmo_time: realizing feet are unique and support-orthogonal") {
  Rng rng(109);
  for (const int n : {3, 4}) {
    const AdsDomain dom(oracles::random_achronal_data(n, 5, rng));
    int done = 0;
    for (int k = 0; k < 200 && done < 25; ++k) {
      const AdsLinearPoint x = oracles::random_interior_point(dom, rng);
      RealizingGeodesic rg;
      try {
        rg = realizing_geodesic(dom, x);
      } catch (const std::domain_error&) {
        continue;
      }
      ++done;
      // direction lies in the span of the active null vectors: the support
      // hyperplane orthogonal to the geodesic is dual to that combination
      REQUIRE(!rg.active_set.empty());
      Eigen::MatrixXd span(n + 1, rg.active_set.size());
      for (size_t i = 0; i < rg.active_set.size(); ++i)
        span.col(i) = dom.null_vectors()[rg.active_set[i]];
      const Eigen::VectorXd coef = span.colPivHouseholderQr().solve(rg.direction);
      CHECK((span * coef - rg.direction).norm() < 1e-6);
      // endpoint check
      const Vec y = ads_exp_timelike(rg.foot_linear, rg.direction, rg.length);
      CHECK((y - x.x).norm() < 1e-7);
    }
    CHECK(done == 25);
  }
}

TEST_CASE("ads_cosmo_time: level samples sit on the level") {
  const AdsDomain dom(oracles::equatorial_data(3, 48));
  for (const double a : {0.4, 1.0}) {
    const auto samples = level_sample(dom, a, 24, 424242);
    REQUIRE(samples.size() == 24);
    for (const auto& s : samples) {
      CHECK(std::abs(cosmological_time(dom, AdsLinearPoint(s.point)) - a) <= 1e-5);
      // fuchsian level is umbilical around the past center: x2 = -cos(a)
      CHECK(s.point[1] == doctest::Approx(-std::cos(a)).epsilon(1e-6));
      CHECK(std::abs(qnorm(s.normal, 2) + 1.0) < 1e-9);
      CHECK(is_future_ads(s.point, s.normal));
    }
  }
}

TEST_CASE("ads_cosmo_time: level samples on random domains") {
  Rng rng(113);
  const AdsDomain dom(oracles::random_achronal_data(3, 6, rng));
  const auto samples = level_sample(dom, 0.5, 16, 777);
  for (const auto& s : samples)
    CHECK(std::abs(cosmological_time(dom, AdsLinearPoint(s.point)) - 0.5) <= 1e-5);
}

TEST_CASE("ads_cosmo_time: empty and invalid level requests") {
  const AdsDomain dom(oracles::equatorial_data(3, 48));
  CHECK(level_sample(dom, 0.5, 0, 1).empty());
  CHECK_THROWS_AS(level_sample(dom, 1.7, 4, 1), std::out_of_range);
  CHECK_THROWS_AS(level_sample(dom, -0.1, 4, 1), std::out_of_range);
}

TEST_CASE("ads_cosmo_time: lightlike boundary segment splits the level") {
  // two boundary points joined by a lightlike segment (theta gap equals the
  // spherical distance) plus a generic third point; levels near the segment
  // carry a degenerate edge, away from it a smooth sheet
  AchronalData data;
  data.n = 3;
  Vec q1(2), q2(2), q3(2);
  q1 << 1.0, 0.0;
  const double gap = 1.2;
  q2 << std::cos(gap), std::sin(gap);
  q3 << std::cos(gap + 2.4), std::sin(gap + 2.4);
  data.points.push_back({q1, 0.0});
  data.points.push_back({q2, gap});
  data.points.push_back({q3, 0.4});
  REQUIRE(validate(data) == AchronalValidation::Ok);
  const AdsDomain dom(data);

  const auto samples = level_sample(dom, 0.35, 12, 99);
  for (const auto& s : samples)
    CHECK(std::abs(cosmological_time(dom, AdsLinearPoint(s.point)) - 0.35) <= 1e-5);
}

TEST_CASE("ads_cosmo_time: reverse time via reflection is exact") {
  Rng rng(127);
  const AdsDomain dom(oracles::random_achronal_data(3, 5, rng));
  for (int k = 0; k < 10; ++k) {
    const AdsLinearPoint x = oracles::random_interior_point(dom, rng);
    const double tau = cosmological_time(dom, x);
    // reverse time of the reflected domain at the reflected point: the same
    // maximization bit for bit
    const AdsDomain refl = dom.time_reflected();
    const double tau_hat = reverse_cosmological_time(refl, AdsLinearPoint(reflect_time_ads(x.x)));
    CHECK(tau == tau_hat);
  }
}

TEST_CASE("ads_cosmo_time: level csv output") {
  const AdsDomain dom(oracles::equatorial_data(3, 48));
  const auto samples = level_sample(dom, 0.5, 4, 3);
  std::ostringstream os;
  write_level_csv(os, dom, samples, 0.5);
  const std::string text = os.str();
  CHECK(text.rfind("t,p1,p2,tau\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);
}
