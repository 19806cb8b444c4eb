#include "cct/ds_foliations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

#include "cct/rng.hpp"

namespace cct {

using nlohmann::json;

namespace {
constexpr double kLeafTol = 1e-9;
constexpr double kGuardBand = 1e-3;
}  // namespace

UmbilicalLeaf make_umbilical_leaf(const Vec& v, double t) {
  if (classify(v, 1) != CausalClass::Timelike)
    throw std::invalid_argument("make_umbilical_leaf: v must be timelike");
  if (v[0] <= 0.0) throw std::invalid_argument("make_umbilical_leaf: v must be future pointing");
  const double q = qnorm(v, 1);
  if (std::abs(q + 1.0) > 1e-9)
    throw std::invalid_argument("make_umbilical_leaf: v must be normalized to Q(v) = -1");
  return {v, t, false};
}

UmbilicalLeaf make_parabolic_leaf(const Vec& v, double c) {
  if (classify(v, 1) != CausalClass::Null)
    throw std::invalid_argument("make_parabolic_leaf: v must be null");
  if (v[0] <= 0.0) throw std::invalid_argument("make_parabolic_leaf: v must be future pointing");
  if (c == 0.0) throw std::invalid_argument("make_parabolic_leaf: c must be nonzero");
  return {v, c, true};
}

double leaf_residual(const UmbilicalLeaf& leaf, const Vec& x) {
  const double offset = leaf.parabolic ? leaf.offset : std::sinh(leaf.offset);
  return qdot(x, leaf.v, 1) + offset;
}

bool leaf_membership(const UmbilicalLeaf& leaf, const DsPoint& x) {
  return std::abs(leaf_residual(leaf, x.x)) <= kLeafTol;
}

double leaf_mean_curvature(const UmbilicalLeaf& leaf) {
  return leaf.parabolic ? -1.0 : -std::tanh(leaf.offset);
}

Vec leaf_point(const UmbilicalLeaf& leaf, const Vec& w) {
  if (!leaf.parabolic) {
    // x = sinh(t) v + cosh(t) w with w unit spacelike orthogonal to v
    return std::sinh(leaf.offset) * leaf.v + std::cosh(leaf.offset) * w;
  }
  // lightcone pair (v, vbar) with <v|vbar> = -1; points over the spacelike
  // complement y: x = alpha v + c vbar + y, alpha = (|y|^2 - 1) / (2c)
  Vec vbar = leaf.v;
  vbar[0] = -vbar[0];
  vbar /= -qdot(leaf.v, vbar, 1);
  const double c = leaf.offset;
  const double alpha = (qnorm(w, 1) - 1.0) / (2.0 * c);
  return alpha * leaf.v + c * vbar + w;
}

std::vector<Vec> leaf_point_sample(const UmbilicalLeaf& leaf, int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vec> pts;
  pts.reserve(count);
  if (!leaf.parabolic) {
    const auto frame = spacelike_complement_frame({leaf.v}, 1, static_cast<int>(leaf.v.size()) - 1);
    for (int k = 0; k < count; ++k) {
      Vec w = Vec::Zero(leaf.v.size());
      const Vec dir = rng.unit_vector(static_cast<int>(frame.size()));
      for (size_t i = 0; i < frame.size(); ++i) w += dir[i] * frame[i];
      pts.push_back(leaf_point(leaf, w));
    }
  } else {
    Vec vbar = leaf.v;
    vbar[0] = -vbar[0];
    vbar /= -qdot(leaf.v, vbar, 1);
    const auto frame = spacelike_complement_frame({leaf.v, vbar}, 1,
                                                  static_cast<int>(leaf.v.size()) - 2);
    for (int k = 0; k < count; ++k) {
      Vec y = Vec::Zero(leaf.v.size());
      for (size_t i = 0; i < frame.size(); ++i) y += 2.0 * rng.gaussian() * frame[i];
      pts.push_back(leaf_point(leaf, y));
    }
  }
  return pts;
}

Vec leaf_future_normal(const UmbilicalLeaf& leaf, const Vec& x) {
  // tangential part of the defining gradient, normalized to Q = -1
  Vec nu = leaf.v - qdot(leaf.v, x, 1) * x;
  const double q = qnorm(nu, 1);
  if (q >= -1e-12) throw std::runtime_error("leaf_future_normal: degenerate normal");
  nu /= std::sqrt(-q);
  if (!is_future_ds(nu)) nu = -nu;
  return nu;
}

double hyperbolic_distance(const Vec& v, const Vec& w) {
  return std::acosh(std::max(1.0, -qdot(v, w, 1)));
}

FoliationVerdict validate_foliation(const FoliationCurve& curve, int samples_per_leaf,
                                    std::uint64_t seed) {
  const int m = static_cast<int>(curve.t.size());
  if (m < 2 || curve.v.size() != curve.t.size())
    throw std::invalid_argument("validate_foliation: needs >= 2 samples (t_i, v_i)");
  for (int i = 1; i < m; ++i)
    if (!(curve.t[i] > curve.t[i - 1]))
      throw std::invalid_argument("validate_foliation: samples must be ordered in t");

  FoliationVerdict verdict;

  // discrete timelike condition: hyperbolic speed of v below 1
  for (int i = 0; i + 1 < m; ++i) {
    const double dt = curve.t[i + 1] - curve.t[i];
    const double dv = hyperbolic_distance(curve.v[i], curve.v[i + 1]);
    if (dv >= dt) {
      verdict.discrete_timelike_ok = false;
      if (verdict.status == FoliationStatus::Ok) {
        verdict.status = FoliationStatus::NotTimelike;
        verdict.i = i;
        verdict.j = i + 1;
      }
    } else if (dv > (1.0 - kGuardBand) * dt) {
      verdict.marginal = true;
    }
  }

  // independent brute force: a crossing shows as a sign change of the leaf-j
  // residual over dense samples of leaf i
  std::vector<UmbilicalLeaf> leaves;
  leaves.reserve(m);
  for (int i = 0; i < m; ++i) leaves.push_back(make_umbilical_leaf(curve.v[i], curve.t[i]));
  for (int i = 0; i < m && verdict.disjoint_ok; ++i) {
    const auto pts = leaf_point_sample(leaves[i], samples_per_leaf,
                                       seed + static_cast<std::uint64_t>(i) * 7919u);
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      double lo = 1e300, hi = -1e300;
      for (const auto& x : pts) {
        const double r = leaf_residual(leaves[j], x);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
      if (lo < -kLeafTol && hi > kLeafTol) {
        verdict.disjoint_ok = false;
        if (verdict.status == FoliationStatus::Ok) verdict.status = FoliationStatus::LeavesIntersect;
        verdict.i = std::min(i, j);
        verdict.j = std::max(i, j);
        break;
      }
    }
  }
  return verdict;
}

double counterexample_mean_curvature(int n, double a) {
  if (n < 3) throw std::invalid_argument("counterexample_mean_curvature: n >= 3 required");
  if (!(a > 0.0)) throw std::out_of_range("counterexample_mean_curvature: a must be positive");
  const double nn = n - 1;
  return -(1.0 / nn) / std::tanh(a) - ((n - 2) / nn) * std::tanh(a);
}

CounterexampleProfile counterexample_profile(int n, const std::vector<double>& a_grid) {
  if (n < 3) throw std::invalid_argument("counterexample_profile: n >= 3 required");
  CounterexampleProfile profile;
  profile.values.reserve(a_grid.size());
  for (const double a : a_grid)
    profile.values.push_back({a, counterexample_mean_curvature(n, a)});
  for (size_t i = 0; i + 1 < profile.values.size(); ++i)
    if (profile.values[i + 1].H <= profile.values[i].H) profile.monotone = false;
  if (n >= 4) {
    // dH/da = 0 at tanh(a) = 1/sqrt(n-2)
    profile.a_max = std::atanh(1.0 / std::sqrt(static_cast<double>(n - 2)));
    profile.h_max = counterexample_mean_curvature(n, profile.a_max);
  } else {
    profile.a_max = std::numeric_limits<double>::infinity();
    profile.h_max = -1.0;
  }
  return profile;
}

FoliationCurve foliation_curve_from_json(const std::string& text) {
  const json j = json::parse(text);
  FoliationCurve curve;
  for (const auto& item : j.at("curve")) {
    curve.t.push_back(item.at("t").get<double>());
    const auto coords = item.at("v").get<std::vector<double>>();
    curve.v.push_back(Eigen::Map<const Vec>(coords.data(), coords.size()));
  }
  return curve;
}

}  // namespace cct
