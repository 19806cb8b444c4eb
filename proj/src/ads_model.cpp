#include "cct/ads_model.hpp"

#include <cmath>
#include <stdexcept>

namespace cct {

namespace {
constexpr double kQuadricTol = 1e-9;
}

AdsLinearPoint::AdsLinearPoint(Vec coords) : x(std::move(coords)) {
  if (x.size() < 3) throw std::invalid_argument("AdsLinearPoint: needs R^{n+1}, n >= 2");
  const double q = qdot(x, x, 2);
  if (std::abs(q + 1.0) > kQuadricTol * std::max(1.0, x.squaredNorm()))
    throw std::invalid_argument("AdsLinearPoint: not on the quadric Q = -1");
}

AdsLinearPoint conformal_to_linear(const AdsConformalPoint& c) {
  const int n = c.n();
  if (std::abs(c.p.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("conformal_to_linear: p must be a unit vector");
  const double pn = c.p[n - 1];
  if (pn <= 0.0)
    throw std::domain_error("conformal_to_linear: boundary point (p_n <= 0) is not in AdS");
  Vec x(n + 1);
  x[0] = std::cos(c.t) / pn;
  x[1] = std::sin(c.t) / pn;
  x.tail(n - 1) = c.p.head(n - 1) / pn;
  return AdsLinearPoint(std::move(x));
}

AdsConformalPoint linear_to_conformal(const AdsLinearPoint& lp) {
  const int n = lp.n();
  const double r = std::hypot(lp.x[0], lp.x[1]);  // r = 1/p_n >= 1
  AdsConformalPoint c;
  c.t = std::atan2(lp.x[1], lp.x[0]);
  c.p.resize(n);
  c.p.head(n - 1) = lp.x.tail(n - 1) / r;
  c.p[n - 1] = 1.0 / r;
  c.p.normalize();
  return c;
}

Vec ads_boundary_null(double theta, const Vec& q) {
  if (std::abs(q.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("ads_boundary_null: q must be a unit vector");
  Vec u(q.size() + 2);
  u[0] = std::cos(theta);
  u[1] = std::sin(theta);
  u.tail(q.size()) = q;
  return u;
}

double lorentz_distance_ads_raw(const Vec& x, const Vec& y) {
  const double c = -qdot(x, y, 2);  // cos of the timelike separation
  if (c <= -1.0 + kTolCausal || c >= 1.0 - kTolCausal) return 0.0;
  return std::acos(c);
}

double lorentz_distance_ads(const AdsLinearPoint& x, const AdsLinearPoint& y) {
  return lorentz_distance_ads_raw(x.x, y.x);
}

CausalRelation causal_sign_boundary(const Vec& null_x, const Vec& y) {
  if (classify(null_x, 2) != CausalClass::Null)
    throw std::invalid_argument("causal_sign_boundary: x must be null");
  const double s = qdot(null_x, y, 2);
  if (s > kTolCausal) return CausalRelation::Timelike;
  if (s >= -kTolCausal) return CausalRelation::Causal;
  return CausalRelation::None;
}

Vec ads_exp_timelike(const Vec& x, const Vec& v, double s) {
  return std::cos(s) * x + std::sin(s) * v;
}

Vec ads_exp_spacelike(const Vec& x, const Vec& v, double s) {
  return std::cosh(s) * x + std::sinh(s) * v;
}

bool is_future_ads(const Vec& x, const Vec& w) { return x[0] * w[1] - x[1] * w[0] > 0.0; }

Vec ads_future_unit(const Vec& x) {
  const double r = std::hypot(x[0], x[1]);
  Vec t = Vec::Zero(x.size());
  t[0] = -x[1] / r;
  t[1] = x[0] / r;
  return t;
}

Vec reflect_time_ads(Vec x) {
  x[1] = -x[1];
  return x;
}

}  // namespace cct
