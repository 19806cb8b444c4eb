#include "cct/gauss_flow.hpp"

#include <cmath>

#include "cct/rng.hpp"

namespace cct {

namespace {
constexpr double kInvariantTol = 1e-9;
}

void validate_patch_sample(const PatchSample& s) {
  if (std::abs(qnorm(s.u, 1) - 1.0) > kInvariantTol * std::max(1.0, s.u.squaredNorm()))
    throw std::invalid_argument("patch sample: u not on the quadric Q = +1");
  if (std::abs(qnorm(s.ustar, 1) + 1.0) > kInvariantTol * std::max(1.0, s.ustar.squaredNorm()))
    throw std::invalid_argument("patch sample: ustar not normalized to Q = -1");
  if (std::abs(qdot(s.u, s.ustar, 1)) > kInvariantTol)
    throw std::invalid_argument("patch sample: u and ustar not orthogonal");
  if (s.ustar[0] <= 0.0)
    throw std::invalid_argument("patch sample: ustar must be future pointing");
  if (s.shape.rows() != s.shape.cols())
    throw std::invalid_argument("patch sample: shape matrix must be square");
  if ((s.shape - s.shape.transpose()).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("patch sample: shape matrix must be symmetric");
}

Vec flow_point(const Vec& u, const Vec& ustar, double t) {
  PatchSample probe{u, ustar, Eigen::MatrixXd::Zero(1, 1)};
  validate_patch_sample(probe);
  return std::cosh(t) * u + std::sinh(t) * ustar;
}

Vec flow_normal(const Vec& u, const Vec& ustar, double t) {
  return std::sinh(t) * u + std::cosh(t) * ustar;
}

Eigen::MatrixXd weingarten_evolution(const Eigen::MatrixXd& B, double t) {
  const double th = std::tanh(t);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(B.rows(), B.cols());
  const Eigen::MatrixXd denom = id - th * B;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(denom);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible())
    throw FlowBreakdown("weingarten_evolution: I - tanh(t) B singular");
  Eigen::MatrixXd bt = -(th * id - B) * lu.inverse();
  return 0.5 * (bt + bt.transpose());  // symmetrize away rounding
}

AlmostFuchsianResult almost_fuchsian_check(const ImmersedPatch& patch, double tol) {
  AlmostFuchsianResult res;
  res.yes = true;
  for (int i = 0; i < static_cast<int>(patch.samples.size()); ++i) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(patch.samples[i].shape);
    const double top = es.eigenvalues().maxCoeff();
    if (!(top < -1.0 - tol)) {
      res.yes = false;
      res.index = i;
      res.eigenvalue = top;
      return res;
    }
  }
  return res;
}

ImmersedPatch umbilical_patch(const UmbilicalLeaf& leaf, int count, std::uint64_t seed) {
  if (leaf.parabolic)
    throw std::invalid_argument("umbilical_patch: timelike leaf required");
  ImmersedPatch patch;
  patch.n = static_cast<int>(leaf.v.size()) - 1;
  const auto pts = leaf_point_sample(leaf, count, seed);
  const double h = -std::tanh(leaf.offset);
  for (const auto& x : pts) {
    PatchSample s;
    s.u = x;
    s.ustar = leaf_future_normal(leaf, x);
    s.shape = h * Eigen::MatrixXd::Identity(patch.n - 1, patch.n - 1);
    patch.samples.push_back(std::move(s));
  }
  return patch;
}

ImmersedPatch distance_sphere_patch(const Vec& p, double a, int count, std::uint64_t seed) {
  if (!(a > 0.0)) throw std::out_of_range("distance_sphere_patch: a must be positive");
  const int dim = static_cast<int>(p.size());
  ImmersedPatch patch;
  patch.n = dim - 1;

  // future unit timelike direction orthogonal to p
  Vec e0 = Vec::Zero(dim);
  e0[0] = 1.0;
  e0 -= qdot(e0, p, 1) * p;
  e0 /= std::sqrt(-qnorm(e0, 1));
  if (e0[0] < 0.0) e0 = -e0;
  const auto frame = spacelike_complement_frame({p, e0}, 1, patch.n - 1);

  Rng rng(seed);
  for (int k = 0; k < count; ++k) {
    const double mu = rng.uniform(0.0, 0.8);
    const Vec dir = rng.unit_vector(patch.n - 1);
    Vec w = std::cosh(mu) * e0;
    for (size_t i = 0; i < frame.size(); ++i) w += std::sinh(mu) * dir[i] * frame[i];
    PatchSample s;
    s.u = std::cosh(a) * p + std::sinh(a) * w;
    s.ustar = std::sinh(a) * p + std::cosh(a) * w;
    s.shape = (-1.0 / std::tanh(a)) * Eigen::MatrixXd::Identity(patch.n - 1, patch.n - 1);
    patch.samples.push_back(std::move(s));
  }
  return patch;
}

double mean_curvature_of_shape(const Eigen::MatrixXd& shape) {
  return shape.trace() / static_cast<double>(shape.rows());
}

}  // namespace cct
