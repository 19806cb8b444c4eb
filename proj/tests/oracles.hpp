#pragma once

// Test-only oracles, independent of the production search paths.

#include <algorithm>
#include <cmath>
#include <vector>

#include "cct/ads_cosmo_time.hpp"
#include "cct/ads_domains.hpp"
#include "cct/ds_domains.hpp"
#include "cct/rng.hpp"

namespace cct::oracles {

// Brute-force cosmological time: sup of Lorentzian length over a dense fan
// of past-directed timelike geodesics from x, each clipped at the first exit
// through a boundary constraint. Exit parameters are solved per constraint:
// <y(s)|u> = cos(s) <x|u> + sin(s) <v|u> crosses zero at a closed-form s.
inline double ads_fan_clip(const AdsDomain& dom, const Vec& x, const Vec& v_past) {
  // first exit of cos(s) x + sin(s) v through any constraint <.|u> = 0
  double s_exit = M_PI;
  for (const auto& u : dom.null_vectors()) {
    const double a = qdot(x, u, 2);  // < 0 inside
    const double b = qdot(v_past, u, 2);
    double s = std::atan2(-a, b);  // first positive root of a cos + b sin
    while (s <= 1e-12) s += M_PI;
    s_exit = std::min(s_exit, s);
  }
  return s_exit;
}

// length of the clipped ray aimed at the past-horizon point over p; zero
// when the pair is not timelike related
inline double ads_fan_ray(const AdsDomain& dom, const Vec& x, const Vec& p) {
  const int dim = static_cast<int>(x.size());
  if (p[dim - 2] < 1e-9) return 0.0;
  const double fm = dom.f_bounds(p).lower;
  Vec z(dim);
  z[0] = std::cos(fm) / p[dim - 2];
  z[1] = std::sin(fm) / p[dim - 2];
  z.tail(dim - 2) = p.head(dim - 2) / p[dim - 2];
  const double c = -qdot(x, z, 2);
  if (c <= -1.0 + 1e-9 || c >= 1.0 - 1e-9) return 0.0;
  const double d = std::acos(c);
  const Vec v = ((z - std::cos(d) * x) / std::sin(d)).eval();  // past unit toward z
  return ads_fan_clip(dom, x, v);
}

inline double ads_fan_tau(const AdsDomain& dom, const Vec& x, int fan_size,
                          std::uint64_t seed) {
  Rng rng(seed);
  const int dim = static_cast<int>(x.size());
  // staged fan: a global spray, then two zooms around the best direction;
  // the maximum can sit on a conical ridge, so the resolution must shrink
  double best = 0.0;
  Vec best_p = Vec::Zero(dim - 1);
  best_p[dim - 2] = 1.0;
  const int stage_size = fan_size / 3;
  for (const double cap : {M_PI, 0.1, 0.01}) {
    const Vec center = best_p;
    for (int k = 0; k < stage_size; ++k) {
      Vec p;
      if (cap >= M_PI) {
        p = rng.unit_vector(dim - 1);
      } else {
        p = (center + cap * std::sqrt(rng.uniform(0, 1)) * rng.unit_vector(dim - 1))
                .normalized();
      }
      p[dim - 2] = std::abs(p[dim - 2]);
      const double len = ads_fan_ray(dom, x, p);
      if (len > best) {
        best = len;
        best_p = p;
      }
    }
  }
  return best;
}

inline double ds_fan_clip(const DsBoundarySet& bs, const Vec& x, const Vec& v_past) {
  // y(s) = cosh(s) x + sinh(s) v exits when tanh(s) = -A/B, B > 0, -A < B
  double s_exit = HUGE_VAL;
  for (const auto& u : bs.null_lifts()) {
    const double a = qdot(x, u, 1);
    const double b = qdot(v_past, u, 1);
    if (b > 0.0 && -a < b) s_exit = std::min(s_exit, std::atanh(-a / b));
  }
  return std::isinf(s_exit) ? 0.0 : s_exit;
}

inline double ds_fan_ray(const DsBoundarySet& bs, const Vec& x, const Vec& center) {
  const int dim = static_cast<int>(x.size());
  const double r = bs.horizon_radius(center);
  if (r < 1e-6 || r > M_PI - 1e-6) return 0.0;
  Vec z(dim);
  z[0] = std::cos(r) / std::sin(r);
  z.tail(dim - 1) = center / std::sin(r);
  const double ch = qdot(x, z, 1);
  if (ch <= 1.0 + 1e-12) return 0.0;
  const double d = std::acosh(ch);
  const Vec v = ((z - std::cosh(d) * x) / std::sinh(d)).eval();
  return ds_fan_clip(bs, x, v);
}

inline double ds_fan_tau(const DsBoundarySet& bs, const Vec& x, int fan_size,
                         std::uint64_t seed) {
  Rng rng(seed);
  const int dim = static_cast<int>(x.size());
  double best = 0.0;
  Vec best_c = ball_of_point(DsPoint(x)).center;
  const int stage_size = fan_size / 3;
  for (const double cap : {M_PI, 0.1, 0.01}) {
    const Vec center0 = best_c;
    for (int k = 0; k < stage_size; ++k) {
      Vec c;
      if (cap >= M_PI) {
        c = rng.unit_vector(dim - 1);
      } else {
        c = (center0 + cap * std::sqrt(rng.uniform(0, 1)) * rng.unit_vector(dim - 1))
                .normalized();
      }
      const double len = ds_fan_ray(bs, x, c);
      if (len > best) {
        best = len;
        best_c = c;
      }
    }
  }
  return best;
}

// Exhaustive active-set enumeration: stationary candidates of d(x, .) on
// every horizon stratum, filtered by feasibility. Independent of the grid
// search; exact on generic data.
inline double ads_subset_tau(const AdsDomain& dom, const Vec& x) {
  const int m = static_cast<int>(dom.null_vectors().size());
  double best = 0.0;
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    std::vector<int> active;
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) active.push_back(i);
    if (active.size() < 2) continue;
    if (const auto ev = detail::ads_sheet_eval(dom, active, x, 1e-7))
      best = std::max(best, ev->tau);
  }
  return best;
}

inline double ds_subset_tau(const DsBoundarySet& bs, const Vec& x) {
  const int m = static_cast<int>(bs.null_lifts().size());
  double best = 0.0;
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    std::vector<int> active;
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) active.push_back(i);
    if (active.size() < 2) continue;
    if (const auto ev = detail::ds_sheet_eval(bs, active, x, 1e-7))
      best = std::max(best, ev->tau);
  }
  return best;
}

// Valid random boundary data: thetas drawn inside the 1-Lipschitz feasible
// interval of the previously placed points, with a safety margin.
inline AchronalData random_achronal_data(int n, int count, Rng& rng, double margin = 0.05) {
  AchronalData data;
  data.n = n;
  for (int i = 0; i < count; ++i) {
    AchronalPoint pt;
    for (;;) {
      pt.p = rng.unit_vector(n - 1);
      bool distinct = true;
      for (const auto& other : data.points)
        if (sphere_distance(pt.p, other.p) < 0.15 ||
            sphere_distance(pt.p, Vec(-other.p)) < 0.15)
          distinct = false;
      if (!distinct) continue;
      double lo = -0.6, hi = 0.6;
      for (const auto& other : data.points) {
        const double d = sphere_distance(pt.p, other.p);
        lo = std::max(lo, other.theta - d + margin);
        hi = std::min(hi, other.theta + d - margin);
      }
      if (lo >= hi) continue;  // no room under the Lipschitz bound, redraw
      pt.theta = rng.uniform(lo, hi);
      break;
    }
    data.points.push_back(std::move(pt));
  }
  return data;
}

inline DsBoundarySet random_ds_boundary(int n, int count, Rng& rng) {
  std::vector<Vec> marks;
  while (static_cast<int>(marks.size()) < count) {
    Vec q = rng.unit_vector(n);
    bool distinct = true;
    for (const auto& other : marks)
      if (sphere_distance(q, other) < 0.3) distinct = false;
    if (distinct) marks.push_back(q);
  }
  return DsBoundarySet(n, std::move(marks));
}

// Equatorial boundary data theta = 0 sampled densely on S^{n-2}.
inline AchronalData equatorial_data(int n, int count) {
  AchronalData data;
  data.n = n;
  if (n == 3) {
    for (int i = 0; i < count; ++i) {
      AchronalPoint pt;
      pt.p = Vec(2);
      const double phi = 2.0 * M_PI * i / count;
      pt.p << std::cos(phi), std::sin(phi);
      data.points.push_back(std::move(pt));
    }
  } else {
    Rng rng(12345);
    for (int i = 0; i < count; ++i) {
      AchronalPoint pt;
      pt.p = rng.unit_vector(n - 1);
      data.points.push_back(std::move(pt));
    }
  }
  return data;
}

// Interior AdS point under the achronal-sphere ceiling, drawn in conformal
// coordinates near the past horizon.
inline AdsLinearPoint random_interior_point(const AdsDomain& dom, Rng& rng,
                                            double beta_lo = 0.15, double beta_hi = 0.5) {
  for (;;) {
    Vec p = rng.unit_vector(dom.n());
    p[dom.n() - 1] = std::abs(p[dom.n() - 1]);
    const FBounds fb = dom.f_bounds(p);
    const double gap = dom.graph_upper(p) - fb.lower;
    if (gap < 0.05) continue;
    const double t = fb.lower + rng.uniform(beta_lo, beta_hi) * std::min(gap, 1.2);
    return conformal_to_linear({t, p});
  }
}

// Tight-region point: retries until the cosmological time lies in the given
// range; the oracles then cross-check the value itself.
inline AdsLinearPoint random_tight_point(const AdsDomain& dom, Rng& rng, double* tau_out,
                                         double tau_max = 1.45) {
  for (;;) {
    const AdsLinearPoint x = random_interior_point(dom, rng);
    const double tau = cosmological_time(dom, x);
    if (tau > 0.02 && tau < tau_max) {
      if (tau_out) *tau_out = tau;
      return x;
    }
  }
}

inline DsPoint random_interior_point_ds(const DsBoundarySet& bs, Rng& rng,
                                        double beta_lo = 0.3, double beta_hi = 0.8) {
  for (;;) {
    Vec c = rng.unit_vector(bs.n());
    const double rmax = bs.horizon_radius(c);
    if (rmax < 1e-3) continue;
    return point_of_ball({c, rng.uniform(beta_lo, beta_hi) * rmax});
  }
}

}  // namespace cct::oracles
