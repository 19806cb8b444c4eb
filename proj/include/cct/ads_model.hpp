#pragma once

#include "cct/pseudo_linalg.hpp"

namespace cct {

/// Conformal coordinates on the universal cover: time t in R and a point p of
/// the closed upper hemisphere of S^{n-1} (unit vector in R^n, last
/// coordinate >= 0). Boundary points have last coordinate 0.
struct AdsConformalPoint {
  double t = 0.0;
  Vec p;

  int n() const { return static_cast<int>(p.size()); }
};

/// Point of the linear model: x in R^{n+1} with Q_{2,n-1}(x) = -1.
struct AdsLinearPoint {
  Vec x;

  explicit AdsLinearPoint(Vec coords);
  int n() const { return static_cast<int>(x.size()) - 1; }
};

enum class CausalRelation { None, Causal, Timelike };

/// Chart between the models:
///   x1 = cos(t)/p_n, x2 = sin(t)/p_n, (x3..x_{n+1}) = pbar/p_n,
/// with p = (pbar, p_n). The preimage requires p interior (p_n > 0).
AdsLinearPoint conformal_to_linear(const AdsConformalPoint& c);
AdsConformalPoint linear_to_conformal(const AdsLinearPoint& x);

/// Null vector (cos t, sin t, q) representing the boundary point (t, q),
/// q a unit vector of the equator S^{n-2} in R^{n-1}.
Vec ads_boundary_null(double theta, const Vec& q);

/// Lorentzian distance restricted to one affine domain: arccos(-<x|y>) when
/// -<x|y> lies in (-1, 1) (the pair is joined by a timelike geodesic of
/// length < pi), 0 otherwise. Symmetric.
double lorentz_distance_ads(const AdsLinearPoint& x, const AdsLinearPoint& y);
double lorentz_distance_ads_raw(const Vec& x, const Vec& y);

/// Causal relation between a null boundary vector and a point of the closure
/// of one affine domain: timelike iff <x|y> > tol, causal iff <x|y> >= -tol.
CausalRelation causal_sign_boundary(const Vec& null_x, const Vec& y);

// geodesics of the quadric Q = -1
Vec ads_exp_timelike(const Vec& x, const Vec& unit_timelike, double s);   // cos/sin
Vec ads_exp_spacelike(const Vec& x, const Vec& unit_spacelike, double s); // cosh/sinh

/// Future orientation of a timelike tangent at x: the conformal time
/// t = atan2(x2, x1) must increase, i.e. x1 w2 - x2 w1 > 0.
bool is_future_ads(const Vec& x, const Vec& w);

/// Future unit timelike tangent along the time circle through x:
/// (-x2, x1, 0, ...) normalized. Defined at every point of the quadric.
Vec ads_future_unit(const Vec& x);

/// Time reflection t -> -t of the linear model: negates x2.
Vec reflect_time_ads(Vec x);

inline constexpr double kTolCausal = 1e-9;

}  // namespace cct
