#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cct/pseudo_linalg.hpp"

namespace cct {

/// Point of the linear model: x in R^{n+1} with Q_{1,n}(x) = +1.
struct DsPoint {
  Vec x;

  explicit DsPoint(Vec coords);
  int n() const { return static_cast<int>(x.size()) - 1; }
};

/// Open round ball of the future boundary sphere S^{n-1}.
struct RoundBall {
  Vec center;            // unit vector of R^n
  double radius = 0.0;   // in (0, pi)
};

/// Finite boundary set: marks q_i on S^{n-1} cutting out S = S^{n-1} \ marks
/// and the future-complete domain over S. At least two marks (hyperbolic
/// case); fewer gives everywhere-infinite cosmological time.
class DsBoundarySet {
 public:
  DsBoundarySet(int n, std::vector<Vec> marks);

  int n() const { return n_; }
  const std::vector<Vec>& marks() const { return marks_; }
  const std::vector<Vec>& null_lifts() const { return null_lifts_; }  // (1, q_i)

  /// min_i of the spherical distance from c to the marks: the horizon in
  /// ball coordinates is its graph {radius = rho^-(center)}.
  double horizon_radius(const Vec& center) const;

  std::vector<int> active_marks(const Vec& center, double tol = 1e-7) const;
  const std::vector<Vec>& center_grid() const { return center_grid_; }

 private:
  int n_;
  std::vector<Vec> marks_;
  std::vector<Vec> null_lifts_;
  std::vector<Vec> center_grid_;
};

/// Ball of future endpoints of timelike geodesics from x:
/// {q in S^{n-1} : <x | (1,q)> > 0}, a round cap with center xbar/|xbar| and
/// radius arccos(x1/|xbar|). Strictly monotone under the causal order.
RoundBall ball_of_point(const DsPoint& x);
DsPoint point_of_ball(const RoundBall& ball);

/// Membership in the future-complete domain: <x | (1,q_i)> < -tol for every
/// mark, i.e. the closed ball of x avoids all marks.
bool contains_ds(const DsBoundarySet& bs, const DsPoint& x);

/// arccosh(<x|y>) when <x|y> > 1 (timelike related), else 0. Symmetric.
double lorentz_distance_ds(const DsPoint& x, const DsPoint& y);
double lorentz_distance_ds_raw(const Vec& x, const Vec& y);

struct RealizingGeodesicDs {
  Vec foot;       // past-horizon point, linear model
  Vec direction;  // future unit timelike at the foot
  double length = 0.0;
  std::vector<int> active_set;
};

struct LevelSampleDs {
  Vec point;
  Vec normal;
  Vec foot;
  std::vector<int> active_set;
};

struct UniquenessViolationDs : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Cosmological time of the domain over S: sup over the past horizon of the
/// Lorentzian distance; grid plus multi-start refinement over ball centers,
/// with a closed-form snap on the active constraint set.
double cosmological_time_ds(const DsBoundarySet& bs, const DsPoint& x);

RealizingGeodesicDs realizing_geodesic_ds(const DsBoundarySet& bs, const DsPoint& x);

std::vector<LevelSampleDs> level_sample_ds(const DsBoundarySet& bs, double a, int count,
                                           std::uint64_t seed, int threads = 1);

/// For |marks| = 2: tau = arccosh(sqrt(Q(x_perp))), x_perp the Q-orthogonal
/// projection of x onto span(u_1, u_2)^perp.
double two_mark_tau(const DsBoundarySet& bs, const DsPoint& x);

/// Smooth-sheet oracle around one level sample (see the AdS counterpart).
struct LevelOracleDs {
  std::function<double(const Vec&)> tau;
  std::function<bool(const Vec&)> feasible;
};
LevelOracleDs make_ds_level_oracle(const DsBoundarySet& bs, const LevelSampleDs& sample);

// geodesics of the quadric Q = +1
Vec ds_exp_timelike(const Vec& x, const Vec& unit_timelike, double s);   // cosh/sinh
Vec ds_exp_spacelike(const Vec& x, const Vec& unit_spacelike, double s); // cos/sin

/// x1 is a time function on the quadric: a timelike tangent w is future
/// oriented iff w1 > 0.
bool is_future_ds(const Vec& w);

/// Time reflection of the linear model: negates x1. Maps the future-complete
/// domain over S to the past-complete one; reverse cosmological time pulls
/// back through it.
Vec reflect_time_ds(Vec x);

DsBoundarySet ds_boundary_from_json(const std::string& text);
std::string ds_boundary_to_json(const DsBoundarySet& bs);

namespace detail {
struct DsSheetEval {
  double tau;
  Vec foot;
};
std::optional<DsSheetEval> ds_sheet_eval(const DsBoundarySet& bs, const std::vector<int>& active,
                                         const Vec& x, double feas_tol = 1e-9);
double ds_local_tau(const DsBoundarySet& bs, const Vec& x, const Vec& center_seed, Vec* foot_out);
}  // namespace detail

}  // namespace cct
