#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "cct/ds_foliations.hpp"
#include "cct/pseudo_linalg.hpp"

namespace cct {

/// Immersion data of a spacelike hypersurface patch: position u on the
/// quadric Q = +1, future unit normal ustar on the hyperboloid Q = -1 with
/// <u|ustar> = 0, and the Weingarten matrix in an orthonormal tangent frame.
struct PatchSample {
  Vec u;
  Vec ustar;
  Eigen::MatrixXd shape;  // symmetric (n-1) x (n-1)
};

struct ImmersedPatch {
  int n = 3;
  std::vector<PatchSample> samples;
};

struct FlowBreakdown : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void validate_patch_sample(const PatchSample& s);

/// Normal flow of a point: cosh(t) u + sinh(t) ustar, which stays on the
/// quadric. Throws on invariant violations.
Vec flow_point(const Vec& u, const Vec& ustar, double t);

/// Flowed normal sinh(t) u + cosh(t) ustar.
Vec flow_normal(const Vec& u, const Vec& ustar, double t);

/// Weingarten evolution under the normal flow:
///   B_t = -(tanh(t) I - B)(I - tanh(t) B)^{-1},
/// eigenvalues move by the Moebius map lambda -> -(tanh t - lambda)/(1 - tanh t lambda).
/// Throws FlowBreakdown when I - tanh(t) B is singular (non-almost-fuchsian
/// data reaching its focal time).
Eigen::MatrixXd weingarten_evolution(const Eigen::MatrixXd& B, double t);

struct AlmostFuchsianResult {
  bool yes = false;
  int index = -1;         // offending sample when not almost-fuchsian
  double eigenvalue = 0;  // its largest eigenvalue
};

/// All principal curvatures < -1 - tol across the patch.
AlmostFuchsianResult almost_fuchsian_check(const ImmersedPatch& patch, double tol = 1e-6);

/// Analytic patch on an umbilical leaf: shape = -tanh(t) I at every sample.
ImmersedPatch umbilical_patch(const UmbilicalLeaf& leaf, int count, std::uint64_t seed);

/// Analytic patch on the distance-a sphere in the future of a point p of the
/// quadric: shape = -coth(a) I (an almost-fuchsian seed for every a > 0).
ImmersedPatch distance_sphere_patch(const Vec& p, double a, int count, std::uint64_t seed);

double mean_curvature_of_shape(const Eigen::MatrixXd& shape);

}  // namespace cct
