#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cct/ads_model.hpp"
#include "cct/pseudo_linalg.hpp"

namespace cct {

/// One boundary datum: a point p of the equator S^{n-2} (unit vector in
/// R^{n-1}) and a time value theta. A finite weighted set represents an
/// achronal boundary sphere as the graph of the induced 1-Lipschitz hull.
struct AchronalPoint {
  Vec p;
  double theta = 0.0;
};

struct AchronalData {
  int n = 3;  // spacetime dimension; boundary points live on S^{n-2}
  std::vector<AchronalPoint> points;
};

enum class AchronalValidation { Ok, PureLightlike, NotLipschitz };

/// Pairwise checks: |theta_i - theta_j| <= d(p_i, p_j) within 1e-9, and the
/// degenerate antipodal gap |theta_i - theta_j| = pi (empty domain).
AchronalValidation validate(const AchronalData& data);

struct FBounds {
  double lower = 0.0;  // f^-
  double upper = 0.0;  // f^+
};

enum class HorizonSide { Past, Future };

/// Invisible domain of a finite achronal boundary set, queried in either
/// model. Immutable after construction; all queries are const and
/// concurrency-safe.
class AdsDomain {
 public:
  explicit AdsDomain(AchronalData data);

  int n() const { return data_.n; }
  const AchronalData& data() const { return data_; }
  const std::vector<Vec>& null_vectors() const { return null_vectors_; }

  /// f^-(p) = max_i(theta_i - d(p, p_i)), f^+(p) = min_i(theta_i + d(p, p_i)),
  /// d the spherical angle between p (upper hemisphere of S^{n-1}, as a unit
  /// vector of R^n) and the embedded equator point (p_i, 0).
  FBounds f_bounds(const Vec& p) const;

  /// f^-(p) < t < f^+(p), strict with margin 1e-9. The domain is open.
  bool contains_conformal(const AdsConformalPoint& c) const;

  /// <x | u_i> < -tol for every cached boundary null vector.
  bool contains_klein(const AdsLinearPoint& x) const;

  /// (f^-(p), p) for the past horizon, (f^+(p), p) for the future one.
  /// Throws on a degenerate fiber (f^- = f^+ within tolerance).
  AdsConformalPoint horizon_point(const Vec& p, HorizonSide side) const;

  /// Domain of the reflected data theta_i -> -theta_i; reverse cosmological
  /// time of this domain is the cosmological time of the reflected one.
  AdsDomain time_reflected() const;

  /// Active constraint indices at a horizon foot given in conformal
  /// coordinates: i with theta_i - d(p, p_i) within tol of f^-(p).
  std::vector<int> active_set_past(const Vec& p, double tol = 1e-7) const;

  /// Ceiling of the domain of the induced achronal sphere (the graph of f^-
  /// over the whole equator): inf_q (f^-(q) + d(p, q)), evaluated on a dense
  /// equator sample. The finite data leaves room above this ceiling where
  /// the cosmological time is no longer regular; seeds for the time
  /// machinery stay below it.
  double graph_upper(const Vec& p) const;

  const std::vector<Vec>& foot_grid() const { return foot_grid_; }

 private:
  AchronalData data_;
  std::vector<Vec> null_vectors_;
  std::vector<Vec> foot_grid_;     // cached hemisphere grid for tau searches
  std::vector<Vec> equator_grid_;  // cached S^{n-2} sample for graph_upper
  std::vector<double> equator_f_;  // f^- on the equator grid
};

AchronalData achronal_from_json(const std::string& text);
std::string achronal_to_json(const AchronalData& data);

/// Spherical angle between unit vectors, clamped against rounding.
double sphere_distance(const Vec& a, const Vec& b);

inline constexpr double kTolMembership = 1e-9;

}  // namespace cct
