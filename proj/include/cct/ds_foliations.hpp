#pragma once

#include <cstdint>
#include <vector>

#include "cct/ds_domains.hpp"
#include "cct/pseudo_linalg.hpp"

namespace cct {

/// Umbilical hypersurface of the quadric Q = +1. For future timelike v
/// (Q(v) = -1, v1 > 0) the leaf at parameter t is
///   { x : x = sinh(t) v + cosh(t) w, w unit spacelike orthogonal to v },
/// i.e. { <x|v> = -sinh(t) }, with constant mean curvature -tanh(t) and
/// future-nested in t. For null v the leaf { <x|v> = -c }, c > 0, is the
/// horosphere dual with constant mean curvature -1.
struct UmbilicalLeaf {
  Vec v;
  double offset = 0.0;  // t for timelike v, c for null v
  bool parabolic = false;
};

UmbilicalLeaf make_umbilical_leaf(const Vec& v_future_timelike, double t);
UmbilicalLeaf make_parabolic_leaf(const Vec& v_future_null, double c);

/// Signed defining function <x|v> + offset-term; zero on the leaf, negative
/// on its future side.
double leaf_residual(const UmbilicalLeaf& leaf, const Vec& x);
bool leaf_membership(const UmbilicalLeaf& leaf, const DsPoint& x);

/// -tanh(t) for timelike leaves, -1 for parabolic ones.
double leaf_mean_curvature(const UmbilicalLeaf& leaf);

/// Point of the leaf: timelike case from a unit spacelike w orthogonal to v,
/// parabolic case from a vector y of the spacelike complement plane.
Vec leaf_point(const UmbilicalLeaf& leaf, const Vec& w);
std::vector<Vec> leaf_point_sample(const UmbilicalLeaf& leaf, int count, std::uint64_t seed);

/// Future unit normal of the leaf at one of its points.
Vec leaf_future_normal(const UmbilicalLeaf& leaf, const Vec& x);

/// arccosh(-<v|w>) between points of the hyperboloid Q = -1 (future sheet).
double hyperbolic_distance(const Vec& v, const Vec& w);

/// Sampled curve t -> v(t) in H^n x R; leaves S_{(t_i, v_i)} are the
/// candidate foliation.
struct FoliationCurve {
  std::vector<double> t;
  std::vector<Vec> v;
};

enum class FoliationStatus { Ok, NotTimelike, LeavesIntersect };

struct FoliationVerdict {
  FoliationStatus status = FoliationStatus::Ok;
  int i = -1, j = -1;        // offending sample pair
  bool marginal = false;     // some step inside the guard band |v'| in (1-1e-3, 1]
  bool discrete_timelike_ok = true;  // consecutive d_hyp(v_i, v_{i+1}) < |dt|
  bool disjoint_ok = true;           // brute-force pairwise leaf disjointness
};

/// Runs the discrete timelike check and an independent brute-force
/// disjointness check (sign change of the leaf-j residual over dense samples
/// of leaf i); the two verdicts are reported separately so the
/// if-and-only-if statement can be tested.
FoliationVerdict validate_foliation(const FoliationCurve& curve, int samples_per_leaf = 256,
                                    std::uint64_t seed = 1);

struct ProfilePoint {
  double a = 0.0;
  double H = 0.0;
};

struct CounterexampleProfile {
  std::vector<ProfilePoint> values;
  bool monotone = true;
  double a_max = 0.0;  // argmax of H over a > 0 (closed form, n >= 4)
  double h_max = 0.0;
};

/// H(a) = -(1/(n-1)) coth(a) - ((n-2)/(n-1)) tanh(a): the constant mean
/// curvature of the cosmological level a of the two-mark domain. Strictly
/// increasing for n = 3, interior maximum at tanh(a) = 1/sqrt(n-2) for
/// n >= 4.
CounterexampleProfile counterexample_profile(int n, const std::vector<double>& a_grid);
double counterexample_mean_curvature(int n, double a);

FoliationCurve foliation_curve_from_json(const std::string& text);

}  // namespace cct
