#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "cct/ads_domains.hpp"

namespace cct {

/// Maximizing past-horizon foot of a point, with the future unit tangent of
/// the geodesic from the foot to the point and its length tau(x).
struct RealizingGeodesic {
  AdsConformalPoint foot;
  Vec foot_linear;
  Vec direction;  // future unit timelike at the foot
  double length = 0.0;
  std::vector<int> active_set;  // boundary constraints active at the foot
};

struct LevelSample {
  Vec point;    // on the tau = a level, linear model
  Vec normal;   // future unit normal = tangent of the realizing geodesic
  Vec foot;     // horizon foot, linear model
  std::vector<int> active_set;
};

/// Signals that multi-start maximization found distinct feet beyond
/// tolerance: the point is outside the tight region or the search failed.
struct UniquenessViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Cosmological time: sup over past-horizon points z of the Lorentzian
/// distance d(x, z). Coarse hemisphere grid, then multi-start local
/// refinement of p -> d(x, (f^-(p), p)); the best foot is snapped to the
/// closed-form stationary point of its active constraint set when possible.
double cosmological_time(const AdsDomain& dom, const AdsLinearPoint& x);

/// Reverse cosmological time, by time reflection of domain and point.
double reverse_cosmological_time(const AdsDomain& dom, const AdsLinearPoint& x);

/// Unique realizing geodesic of a tight-region point (tau < pi/2). Enforces
/// agreement of >= 8 starts within 1e-5 in foot position.
RealizingGeodesic realizing_geodesic(const AdsDomain& dom, const AdsLinearPoint& x);

/// Points of the level {tau = a}, a in (0, pi/2), built by shooting the
/// realizing geodesics of random interior points to length a. Realizing
/// segments stay realizing, so each returned point has tau = a.
std::vector<LevelSample> level_sample(const AdsDomain& dom, double a, int count,
                                      std::uint64_t seed, int threads = 1);

/// CSV rows "t,p1..p_{n-1},tau" in conformal coordinates (p_n >= 0 implied).
void write_level_csv(std::ostream& os, const AdsDomain& dom,
                     const std::vector<LevelSample>& samples, double a);

/// Smooth-sheet oracle of a cosmological level around one sample: an exact
/// local formula for tau with a feasibility predicate that fails when the
/// active set would change (edge shadow).
struct LevelOracle {
  std::function<double(const Vec&)> tau;
  std::function<bool(const Vec&)> feasible;
};

/// Closed-form oracle from the sample's active set; falls back to a
/// warm-started local maximization when the set is degenerate.
LevelOracle make_ads_level_oracle(const AdsDomain& dom, const LevelSample& sample);

namespace detail {

/// Stationary value of d(x, .) on the horizon stratum with active set A:
/// tau = arccos(sqrt(-Q(x_perp))), x_perp the Q-orthogonal projection of x
/// onto span{u_i : i in A}^perp. Returns nothing if the stratum is
/// degenerate, the foot infeasible, or the pair not timelike related.
struct SheetEval {
  double tau;
  Vec foot;
};
std::optional<SheetEval> ads_sheet_eval(const AdsDomain& dom, const std::vector<int>& active,
                                        const Vec& x, double feas_tol = 1e-9);

/// Local maximization of p -> d(x, z(p)) from a warm start; value-accurate
/// refinement used both by the production path and the fallback oracle.
double ads_local_tau(const AdsDomain& dom, const Vec& x, const Vec& p_seed, Vec* foot_out);

}  // namespace detail

}  // namespace cct
