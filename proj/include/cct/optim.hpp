#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "cct/rng.hpp"

namespace cct {

struct NelderMeadOptions {
  int max_iter = 400;
  double xtol = 1e-9;  // simplex diameter
  double ftol = 0.0;   // 0 disables the f-based stop
  double initial_step = 0.2;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double f = 0.0;
  int iterations = 0;
};

/// Derivative-free minimizer for small dimensions (<= 4 here). Tolerates the
/// kinks of max-type objectives; termination is driven by simplex size.
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& x0, const NelderMeadOptions& opts = {});

/// Euclidean-orthonormal tangent basis at a unit vector p0; local chart
/// xi -> normalize(p0 + B xi) of the sphere.
struct SphereChart {
  Eigen::VectorXd p0;
  Eigen::MatrixXd basis;  // dim x (dim-1)

  explicit SphereChart(const Eigen::VectorXd& p);
  Eigen::VectorXd map(const Eigen::VectorXd& xi) const;
  int local_dim() const { return static_cast<int>(basis.cols()); }
};

/// Deterministic quasi-uniform point set on S^{dim-1}. Fibonacci lattice for
/// dim == 3, seeded low-discrepancy-ish sampling otherwise.
std::vector<Eigen::VectorXd> sphere_grid(int dim, int count);

/// Safeguarded 1D root finder on [lo, hi]; f(lo), f(hi) must bracket a root.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double tol = 1e-14);

/// Runs fn(i) for i in [0, count) over `threads` threads. Work items must be
/// independent; per-index seeding keeps results thread-count invariant.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

}  // namespace cct
