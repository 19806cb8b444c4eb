#include "cct/ads_domains.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

#include "cct/optim.hpp"

namespace cct {

using nlohmann::json;

double sphere_distance(const Vec& a, const Vec& b) {
  // well conditioned at both ends, unlike acos of the dot product
  return 2.0 * std::atan2((a - b).norm(), (a + b).norm());
}

namespace {

// distance inside the closed upper hemisphere between p (unit, R^n) and the
// embedded equator point (q, 0); the hemisphere is geodesically convex, so
// the intrinsic distance equals the ambient angle.
double equator_distance(const Vec& p, const Vec& q) {
  const auto head = p.head(q.size());
  const double dm = std::sqrt((head - q).squaredNorm() + p.tail(p.size() - q.size()).squaredNorm());
  const double dp = std::sqrt((head + q).squaredNorm() + p.tail(p.size() - q.size()).squaredNorm());
  return 2.0 * std::atan2(dm, dp);
}

}  // namespace

AchronalValidation validate(const AchronalData& data) {
  if (data.points.empty()) throw std::invalid_argument("AchronalData: empty point list");
  const int m = static_cast<int>(data.points.size());
  for (const auto& pt : data.points) {
    if (pt.p.size() != data.n - 1)
      throw std::invalid_argument("AchronalData: point dimension must be n-1");
    if (std::abs(pt.p.norm() - 1.0) > 1e-9)
      throw std::invalid_argument("AchronalData: boundary points must be unit vectors");
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const double gap = std::abs(data.points[i].theta - data.points[j].theta);
      const double d = sphere_distance(data.points[i].p, data.points[j].p);
      if (gap > d + 1e-9) return AchronalValidation::NotLipschitz;
    }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const double gap = std::abs(data.points[i].theta - data.points[j].theta);
      if ((data.points[i].p + data.points[j].p).norm() <= 1e-6 &&
          std::abs(gap - M_PI) <= 1e-9)
        return AchronalValidation::PureLightlike;
    }
  return AchronalValidation::Ok;
}

AdsDomain::AdsDomain(AchronalData data) : data_(std::move(data)) {
  switch (validate(data_)) {
    case AchronalValidation::Ok:
      break;
    case AchronalValidation::PureLightlike:
      throw std::invalid_argument("AdsDomain: pure lightlike data, the domain is empty");
    case AchronalValidation::NotLipschitz:
      throw std::invalid_argument("AdsDomain: data violates the 1-Lipschitz bound");
  }
  null_vectors_.reserve(data_.points.size());
  for (const auto& pt : data_.points)
    null_vectors_.push_back(ads_boundary_null(pt.theta, pt.p));

  // hemisphere search grid, folded from a full-sphere lattice
  const int count = 40 * data_.n;
  for (auto& p : sphere_grid(data_.n, count)) {
    p[data_.n - 1] = std::abs(p[data_.n - 1]);
    foot_grid_.push_back(p);
  }

  // equator sample for the graph ceiling
  const int eq_count = data_.n == 3 ? 512 : (data_.n == 4 ? 1600 : 4000);
  equator_grid_ = sphere_grid(data_.n - 1, eq_count);
  equator_f_.reserve(equator_grid_.size());
  for (const auto& q : equator_grid_) {
    double fm = -1e300;
    for (const auto& pt : data_.points)
      fm = std::max(fm, pt.theta - sphere_distance(q, pt.p));
    equator_f_.push_back(fm);
  }
}

double AdsDomain::graph_upper(const Vec& p) const {
  double up = 1e300;
  for (const auto& pt : data_.points)
    up = std::min(up, pt.theta + equator_distance(p, pt.p));
  for (size_t i = 0; i < equator_grid_.size(); ++i)
    up = std::min(up, equator_f_[i] + equator_distance(p, equator_grid_[i]));
  return up;
}

FBounds AdsDomain::f_bounds(const Vec& p) const {
  FBounds fb{-1e300, 1e300};
  for (const auto& pt : data_.points) {
    const double d = equator_distance(p, pt.p);
    fb.lower = std::max(fb.lower, pt.theta - d);
    fb.upper = std::min(fb.upper, pt.theta + d);
  }
  return fb;
}

bool AdsDomain::contains_conformal(const AdsConformalPoint& c) const {
  const FBounds fb = f_bounds(c.p);
  return c.t > fb.lower + kTolMembership && c.t < fb.upper - kTolMembership;
}

bool AdsDomain::contains_klein(const AdsLinearPoint& x) const {
  for (const auto& u : null_vectors_)
    if (qdot(x.x, u, 2) >= -kTolMembership) return false;
  return true;
}

AdsConformalPoint AdsDomain::horizon_point(const Vec& p, HorizonSide side) const {
  const FBounds fb = f_bounds(p);
  if (fb.upper - fb.lower <= 2.0 * kTolMembership)
    throw std::domain_error("horizon_point: degenerate fiber (f^- = f^+)");
  return {side == HorizonSide::Past ? fb.lower : fb.upper, p};
}

AdsDomain AdsDomain::time_reflected() const {
  AchronalData refl = data_;
  for (auto& pt : refl.points) pt.theta = -pt.theta;
  return AdsDomain(std::move(refl));
}

std::vector<int> AdsDomain::active_set_past(const Vec& p, double tol) const {
  const FBounds fb = f_bounds(p);
  std::vector<int> act;
  for (int i = 0; i < static_cast<int>(data_.points.size()); ++i) {
    const double v = data_.points[i].theta - equator_distance(p, data_.points[i].p);
    if (fb.lower - v <= tol) act.push_back(i);
  }
  return act;
}

AchronalData achronal_from_json(const std::string& text) {
  const json j = json::parse(text);
  if (j.at("model").get<std::string>() != "ads")
    throw std::invalid_argument("achronal_from_json: model must be \"ads\"");
  AchronalData data;
  data.n = j.at("n").get<int>();
  for (const auto& item : j.at("points")) {
    AchronalPoint pt;
    const auto coords = item.at("p").get<std::vector<double>>();
    pt.p = Eigen::Map<const Vec>(coords.data(), coords.size());
    pt.theta = item.at("theta").get<double>();
    data.points.push_back(std::move(pt));
  }
  return data;
}

std::string achronal_to_json(const AchronalData& data) {
  json pts = json::array();
  for (const auto& pt : data.points) {
    std::vector<double> coords(pt.p.data(), pt.p.data() + pt.p.size());
    pts.push_back({{"p", coords}, {"theta", pt.theta}});
  }
  return json{{"model", "ads"}, {"n", data.n}, {"points", pts}}.dump();
}

}  // namespace cct
