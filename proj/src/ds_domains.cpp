#include "cct/ds_domains.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

#include "cct/ads_domains.hpp"  // sphere_distance
#include "cct/optim.hpp"
#include "cct/rng.hpp"

namespace cct {

using nlohmann::json;

namespace {
constexpr double kQuadricTol = 1e-9;
constexpr double kTolStrict = 1e-9;
constexpr double kFootTol = 1e-5;
constexpr double kActiveTol = 1e-6;
}  // namespace

DsPoint::DsPoint(Vec coords) : x(std::move(coords)) {
  if (x.size() < 3) throw std::invalid_argument("DsPoint: needs R^{n+1}, n >= 2");
  const double q = qdot(x, x, 1);
  if (std::abs(q - 1.0) > kQuadricTol * std::max(1.0, x.squaredNorm()))
    throw std::invalid_argument("DsPoint: not on the quadric Q = +1");
}

DsBoundarySet::DsBoundarySet(int n, std::vector<Vec> marks) : n_(n), marks_(std::move(marks)) {
  if (static_cast<int>(marks_.size()) < 2)
    throw std::invalid_argument("DsBoundarySet: needs at least two marks (hyperbolic case)");
  for (const auto& q : marks_) {
    if (q.size() != n_) throw std::invalid_argument("DsBoundarySet: marks must lie in R^n");
    if (std::abs(q.norm() - 1.0) > 1e-9)
      throw std::invalid_argument("DsBoundarySet: marks must be unit vectors");
  }
  for (size_t i = 0; i < marks_.size(); ++i)
    for (size_t j = i + 1; j < marks_.size(); ++j)
      if (sphere_distance(marks_[i], marks_[j]) <= 1e-6)
        throw std::invalid_argument("DsBoundarySet: marks must be pairwise distinct");
  null_lifts_.reserve(marks_.size());
  for (const auto& q : marks_) {
    Vec u(n_ + 1);
    u[0] = 1.0;
    u.tail(n_) = q;
    null_lifts_.push_back(std::move(u));
  }
  center_grid_ = sphere_grid(n_, 40 * n_);
}

double DsBoundarySet::horizon_radius(const Vec& center) const {
  double r = std::numeric_limits<double>::infinity();
  for (const auto& q : marks_) r = std::min(r, sphere_distance(center, q));
  return r;
}

std::vector<int> DsBoundarySet::active_marks(const Vec& center, double tol) const {
  const double r = horizon_radius(center);
  std::vector<int> act;
  for (int i = 0; i < static_cast<int>(marks_.size()); ++i)
    if (sphere_distance(center, marks_[i]) - r <= tol) act.push_back(i);
  return act;
}

RoundBall ball_of_point(const DsPoint& pt) {
  const int n = pt.n();
  const Vec xbar = pt.x.tail(n);
  const double rho = xbar.norm();  // sqrt(1 + x1^2) >= 1
  RoundBall ball;
  ball.center = xbar / rho;
  ball.radius = std::acos(std::clamp(pt.x[0] / rho, -1.0, 1.0));
  return ball;
}

DsPoint point_of_ball(const RoundBall& ball) {
  if (!(ball.radius > 0.0 && ball.radius < M_PI))
    throw std::invalid_argument("point_of_ball: radius must lie in (0, pi)");
  const double s = std::sin(ball.radius);
  Vec x(ball.center.size() + 1);
  x[0] = std::cos(ball.radius) / s;
  x.tail(ball.center.size()) = ball.center / s;
  return DsPoint(std::move(x));
}

bool contains_ds(const DsBoundarySet& bs, const DsPoint& x) {
  for (const auto& u : bs.null_lifts())
    if (qdot(x.x, u, 1) >= -kTolStrict) return false;
  return true;
}

double lorentz_distance_ds_raw(const Vec& x, const Vec& y) {
  const double c = qdot(x, y, 1);
  if (c <= 1.0 + kTolStrict) return 0.0;
  return std::acosh(c);
}

double lorentz_distance_ds(const DsPoint& x, const DsPoint& y) {
  return lorentz_distance_ds_raw(x.x, y.x);
}

Vec ds_exp_timelike(const Vec& x, const Vec& v, double s) {
  return std::cosh(s) * x + std::sinh(s) * v;
}

Vec ds_exp_spacelike(const Vec& x, const Vec& v, double s) {
  return std::cos(s) * x + std::sin(s) * v;
}

bool is_future_ds(const Vec& w) { return w[0] > 0.0; }

Vec reflect_time_ds(Vec x) {
  x[0] = -x[0];
  return x;
}

namespace {

// past-horizon point over a ball center
Vec horizon_foot_ds(const DsBoundarySet& bs, const Vec& center) {
  const double r = bs.horizon_radius(center);
  const double s = std::sin(r);
  Vec z(center.size() + 1);
  z[0] = std::cos(r) / s;
  z.tail(center.size()) = center / s;
  return z;
}

double foot_objective_ds(const DsBoundarySet& bs, const Vec& x, const Vec& center) {
  const double r = bs.horizon_radius(center);
  if (r <= 1e-9 || r >= M_PI - 1e-9) return 0.0;
  return lorentz_distance_ds_raw(x, horizon_foot_ds(bs, center));
}

// negative guidance proportional to <x|z> - 1 keeps the simplex moving on
// the plateau of unrelated feet
double guided_objective_ds(const DsBoundarySet& bs, const Vec& x, const Vec& center) {
  const double r = bs.horizon_radius(center);
  if (r <= 1e-9 || r >= M_PI - 1e-9) return -1.0;
  const double ch = qdot(x, horizon_foot_ds(bs, center), 1);
  if (ch <= 1.0 + kTolStrict) return 0.01 * std::min(ch - 1.0, 0.0);
  return std::acosh(ch);
}

struct RefinedFootDs {
  Vec center;
  double value;
};

RefinedFootDs refine_foot_ds(const DsBoundarySet& bs, const Vec& x, const Vec& start,
                             double initial_step) {
  SphereChart chart(start);
  auto neg = [&](const Eigen::VectorXd& xi) {
    return -guided_objective_ds(bs, x, chart.map(xi));
  };
  NelderMeadOptions opts;
  opts.initial_step = initial_step;
  opts.xtol = 1e-10;
  opts.max_iter = 600;
  const auto res = nelder_mead(neg, Eigen::VectorXd::Zero(chart.local_dim()), opts);
  const Vec c = chart.map(res.x);
  return {c, foot_objective_ds(bs, x, c)};
}

struct SearchResultDs {
  RefinedFootDs best;
  std::vector<RefinedFootDs> feet;
};

SearchResultDs multi_start_search_ds(const DsBoundarySet& bs, const Vec& x, int starts) {
  std::vector<std::pair<double, int>> scored;
  const auto& grid = bs.center_grid();
  scored.reserve(grid.size());
  for (int i = 0; i < static_cast<int>(grid.size()); ++i)
    scored.emplace_back(foot_objective_ds(bs, x, grid[i]), i);
  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  SearchResultDs out;
  // the ball center of x is a reliable start when the basin shrinks near the
  // horizon; grid starts cover the rest
  out.feet.push_back(refine_foot_ds(bs, x, ball_of_point(DsPoint(x)).center, 0.1));
  for (int k = 0; k < starts && k < static_cast<int>(scored.size()); ++k)
    out.feet.push_back(refine_foot_ds(bs, x, grid[scored[k].second], 0.15));
  out.best = *std::max_element(out.feet.begin(), out.feet.end(),
                               [](const auto& a, const auto& b) { return a.value < b.value; });
  return out;
}

void rescue_low_feet_ds(const DsBoundarySet& bs, const Vec& x, SearchResultDs* sr) {
  SphereChart chart(sr->best.center);
  int k = 0;
  for (auto& foot : sr->feet) {
    ++k;
    if (sr->best.value - foot.value <= 1e-6) continue;
    Eigen::VectorXd xi = Eigen::VectorXd::Zero(chart.local_dim());
    xi[(k - 1) % chart.local_dim()] = 1e-3 * ((k % 2) ? 1.0 : -1.0);
    foot = refine_foot_ds(bs, x, chart.map(xi), 2e-3);
    if (foot.value > sr->best.value) sr->best = foot;
  }
}

double foot_spread_ds(const std::vector<RefinedFootDs>& feet) {
  double spread = 0.0;
  for (size_t i = 0; i < feet.size(); ++i)
    for (size_t j = i + 1; j < feet.size(); ++j)
      spread = std::max(spread, (feet[i].center - feet[j].center).norm());
  return spread;
}

}  // namespace

namespace detail {

std::optional<DsSheetEval> ds_sheet_eval(const DsBoundarySet& bs, const std::vector<int>& active,
                                         const Vec& x, double feas_tol) {
  if (active.size() < 2) return std::nullopt;
  const auto& lifts = bs.null_lifts();
  const int dim = static_cast<int>(x.size());

  Eigen::MatrixXd all(dim, active.size());
  for (size_t i = 0; i < active.size(); ++i) all.col(i) = lifts[active[i]];
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(all);
  qr.setThreshold(1e-9);
  const int m = static_cast<int>(qr.rank());
  if (m < 2) return std::nullopt;
  Eigen::MatrixXd span(dim, m);
  for (int i = 0; i < m; ++i) span.col(i) = all.col(qr.colsPermutation().indices()[i]);

  Eigen::MatrixXd gram(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) gram(i, j) = qdot(span.col(i), span.col(j), 1);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  lu.setThreshold(1e-10);
  if (!lu.isInvertible()) return std::nullopt;

  Eigen::VectorXd rhs(m);
  for (int i = 0; i < m; ++i) rhs[i] = qdot(span.col(i), x, 1);
  const Vec x_perp = x - span * lu.solve(rhs);
  const double q = qnorm(x_perp, 1);
  if (q <= 1.0 + 1e-12) return std::nullopt;  // foot would not be timelike related
  const double mnorm = std::sqrt(q);

  const Vec z = x_perp / mnorm;  // <x|z> = +mnorm > 1
  for (const auto& u : lifts)
    if (qdot(z, u, 1) > feas_tol) return std::nullopt;
  const double d = std::acosh(mnorm);
  const Vec dir = (x - std::cosh(d) * z) / std::sinh(d);
  if (!is_future_ds(dir)) return std::nullopt;  // foot must lie in the past
  return DsSheetEval{d, z};
}

double ds_local_tau(const DsBoundarySet& bs, const Vec& x, const Vec& center_seed,
                    Vec* foot_out) {
  const auto foot = refine_foot_ds(bs, x, center_seed, 0.02);
  if (foot_out) *foot_out = foot.center;
  return foot.value;
}

}  // namespace detail

double cosmological_time_ds(const DsBoundarySet& bs, const DsPoint& x) {
  if (!contains_ds(bs, x))
    throw std::domain_error("cosmological_time_ds: point outside the domain");
  auto sr = multi_start_search_ds(bs, x.x, 8);
  const auto active = bs.active_marks(sr.best.center, kActiveTol);
  if (const auto sheet = detail::ds_sheet_eval(bs, active, x.x)) {
    if (std::abs(sheet->tau - sr.best.value) < 1e-4)
      return std::max(sheet->tau, sr.best.value);
  }
  return sr.best.value;
}

RealizingGeodesicDs realizing_geodesic_ds(const DsBoundarySet& bs, const DsPoint& x) {
  if (!contains_ds(bs, x))
    throw std::domain_error("realizing_geodesic_ds: point outside the domain");
  auto sr = multi_start_search_ds(bs, x.x, 8);
  rescue_low_feet_ds(bs, x.x, &sr);
  if (foot_spread_ds(sr.feet) > kFootTol)
    throw UniquenessViolationDs("realizing_geodesic_ds: starts disagree on the foot");

  RealizingGeodesicDs rg;
  rg.length = sr.best.value;
  rg.active_set = bs.active_marks(sr.best.center, kActiveTol);
  Vec z = horizon_foot_ds(bs, sr.best.center);
  if (const auto sheet = detail::ds_sheet_eval(bs, rg.active_set, x.x)) {
    if (std::abs(sheet->tau - rg.length) < 1e-4 && sheet->tau >= rg.length - 1e-9) {
      rg.length = sheet->tau;
      z = sheet->foot;
    }
  }
  if (rg.length <= 1e-9)
    throw std::domain_error("realizing_geodesic_ds: point sits on the horizon");
  rg.foot = z;
  rg.direction = (x.x - std::cosh(rg.length) * z) / std::sinh(rg.length);
  return rg;
}

std::vector<LevelSampleDs> level_sample_ds(const DsBoundarySet& bs, double a, int count,
                                           std::uint64_t seed, int threads) {
  if (!(a > 0.0)) throw std::out_of_range("level_sample_ds: a must be positive");
  std::vector<LevelSampleDs> samples(count);
  parallel_for(count, threads, [&](int idx) {
    Rng rng = Rng::for_index(seed, idx);
    for (int attempt = 0;; ++attempt) {
      if (attempt > 60) throw std::runtime_error("level_sample_ds: no interior point found");
      Vec c = rng.unit_vector(bs.n());
      const double rmax = bs.horizon_radius(c);
      if (rmax < 1e-4 || rmax > M_PI - 1e-4) continue;
      const double beta = rng.uniform(0.3, 0.8);
      DsPoint x = point_of_ball({c, beta * rmax});
      try {
        const RealizingGeodesicDs rg = realizing_geodesic_ds(bs, x);
        LevelSampleDs s;
        s.point = ds_exp_timelike(rg.foot, rg.direction, a);
        s.normal = std::sinh(a) * rg.foot + std::cosh(a) * rg.direction;
        s.foot = rg.foot;
        s.active_set = rg.active_set;
        samples[idx] = std::move(s);
        return;
      } catch (const UniquenessViolationDs&) {
        continue;
      } catch (const std::domain_error&) {
        continue;
      }
    }
  });
  return samples;
}

double two_mark_tau(const DsBoundarySet& bs, const DsPoint& x) {
  if (bs.marks().size() != 2)
    throw std::invalid_argument("two_mark_tau: exactly two marks required");
  const auto ev = detail::ds_sheet_eval(bs, {0, 1}, x.x);
  if (!ev) throw std::domain_error("two_mark_tau: point not timelike related to the core");
  return ev->tau;
}

LevelOracleDs make_ds_level_oracle(const DsBoundarySet& bs, const LevelSampleDs& sample) {
  if (detail::ds_sheet_eval(bs, sample.active_set, sample.point)) {
    const DsBoundarySet* b = &bs;
    const auto active = sample.active_set;
    LevelOracleDs oracle;
    oracle.tau = [b, active](const Vec& y) {
      const auto ev = detail::ds_sheet_eval(*b, active, y);
      return ev ? ev->tau : std::numeric_limits<double>::quiet_NaN();
    };
    oracle.feasible = [b, active](const Vec& y) {
      return detail::ds_sheet_eval(*b, active, y).has_value();
    };
    return oracle;
  }
  const DsBoundarySet* b = &bs;
  const Vec seed = ball_of_point(DsPoint(sample.foot)).center;
  LevelOracleDs oracle;
  oracle.tau = [b, seed](const Vec& y) { return detail::ds_local_tau(*b, y, seed, nullptr); };
  oracle.feasible = [](const Vec&) { return true; };
  return oracle;
}

DsBoundarySet ds_boundary_from_json(const std::string& text) {
  const json j = json::parse(text);
  if (j.at("model").get<std::string>() != "ds")
    throw std::invalid_argument("ds_boundary_from_json: model must be \"ds\"");
  const int n = j.at("n").get<int>();
  std::vector<Vec> marks;
  for (const auto& item : j.at("marks")) {
    const auto coords = item.get<std::vector<double>>();
    marks.push_back(Eigen::Map<const Vec>(coords.data(), coords.size()));
  }
  return DsBoundarySet(n, std::move(marks));
}

std::string ds_boundary_to_json(const DsBoundarySet& bs) {
  json marks = json::array();
  for (const auto& q : bs.marks())
    marks.push_back(std::vector<double>(q.data(), q.data() + q.size()));
  return json{{"model", "ds"}, {"n", bs.n()}, {"marks", marks}}.dump();
}

}  // namespace cct
