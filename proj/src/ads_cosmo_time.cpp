#include "cct/ads_cosmo_time.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "cct/optim.hpp"
#include "cct/rng.hpp"

namespace cct {

namespace {

constexpr double kFootTol = 1e-5;       // multi-start agreement in foot position
constexpr double kActiveTol = 1e-6;     // active-set detection at a foot
constexpr double kEquatorGuard = 1e-9;  // feet cannot sit on the conformal boundary

Vec fold_upper(Vec p) {
  p[p.size() - 1] = std::abs(p[p.size() - 1]);
  return p;
}

// linear-model representative of the past-horizon point over p
bool horizon_foot(const AdsDomain& dom, const Vec& p, Vec* out) {
  if (p[p.size() - 1] <= kEquatorGuard) return false;
  const double fm = dom.f_bounds(p).lower;
  const double pn = p[p.size() - 1];
  Vec z(p.size() + 1);
  z[0] = std::cos(fm) / pn;
  z[1] = std::sin(fm) / pn;
  z.tail(p.size() - 1) = p.head(p.size() - 1) / pn;
  *out = std::move(z);
  return true;
}

double foot_objective(const AdsDomain& dom, const Vec& x, const Vec& p) {
  Vec z;
  if (!horizon_foot(dom, p, &z)) return 0.0;
  return lorentz_distance_ads_raw(x, z);
}

// The raw objective is flat outside the band -<x|z(p)> in (-1, 1); negative
// guidance proportional to the band distance keeps the simplex moving across
// both plateaus (unrelated feet and feet beyond the length-pi cap).
double guided_objective(const AdsDomain& dom, const Vec& x, const Vec& p) {
  Vec z;
  if (!horizon_foot(dom, p, &z)) return -1.0;
  const double c = -qdot(x, z, 2);
  if (c <= -1.0 + kTolCausal) return 0.01 * (c + 1.0);
  if (c >= 1.0 - kTolCausal) return 0.01 * (1.0 - c);
  return std::acos(c);
}

struct RefinedFoot {
  Vec p;         // hemisphere point
  double value;  // distance to the horizon over p
};

RefinedFoot refine_foot(const AdsDomain& dom, const Vec& x, const Vec& start,
                        double initial_step) {
  SphereChart chart(start);
  auto neg = [&](const Eigen::VectorXd& xi) {
    return -guided_objective(dom, x, fold_upper(chart.map(xi)));
  };
  NelderMeadOptions opts;
  opts.initial_step = initial_step;
  opts.xtol = 1e-10;
  opts.max_iter = 600;
  const auto res = nelder_mead(neg, Eigen::VectorXd::Zero(chart.local_dim()), opts);
  const Vec p = fold_upper(chart.map(res.x));
  return {p, foot_objective(dom, x, p)};
}

struct SearchResult {
  RefinedFoot best;
  std::vector<RefinedFoot> feet;
};

SearchResult multi_start_search(const AdsDomain& dom, const Vec& x, int starts) {
  std::vector<std::pair<double, int>> scored;
  const auto& grid = dom.foot_grid();
  scored.reserve(grid.size());
  for (int i = 0; i < static_cast<int>(grid.size()); ++i)
    scored.emplace_back(foot_objective(dom, x, grid[i]), i);
  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  SearchResult out;
  out.feet.reserve(starts + 1);
  // the fiber of x always sees the horizon; near the horizon it is the only
  // reliable start, the grid being too coarse for the shrinking basin
  out.feet.push_back(refine_foot(dom, x, linear_to_conformal(AdsLinearPoint(x)).p, 0.1));
  for (int k = 0; k < starts && k < static_cast<int>(scored.size()); ++k)
    out.feet.push_back(refine_foot(dom, x, grid[scored[k].second], 0.15));
  out.best = *std::max_element(out.feet.begin(), out.feet.end(),
                               [](const auto& a, const auto& b) { return a.value < b.value; });
  return out;
}

// Rescue starts stuck on strictly lower local maxima by re-running them from
// perturbations of the best foot. Feet of equal optimal value are kept
// as-is, so genuinely distinct maximizers still surface.
void rescue_low_feet(const AdsDomain& dom, const Vec& x, SearchResult* sr) {
  SphereChart chart(sr->best.p);
  int k = 0;
  for (auto& foot : sr->feet) {
    ++k;
    if (sr->best.value - foot.value <= 1e-6) continue;
    Eigen::VectorXd xi = Eigen::VectorXd::Zero(chart.local_dim());
    xi[(k - 1) % chart.local_dim()] = 1e-3 * ((k % 2) ? 1.0 : -1.0);
    foot = refine_foot(dom, x, fold_upper(chart.map(xi)), 2e-3);
    if (foot.value > sr->best.value) sr->best = foot;
  }
}

double foot_spread(const std::vector<RefinedFoot>& feet) {
  double spread = 0.0;
  for (size_t i = 0; i < feet.size(); ++i)
    for (size_t j = i + 1; j < feet.size(); ++j)
      spread = std::max(spread, (feet[i].p - feet[j].p).norm());
  return spread;
}

}  // namespace

namespace detail {

std::optional<SheetEval> ads_sheet_eval(const AdsDomain& dom, const std::vector<int>& active,
                                        const Vec& x, double feas_tol) {
  if (active.size() < 2) return std::nullopt;
  const auto& nulls = dom.null_vectors();
  const int dim = static_cast<int>(x.size());

  // reduce to an independent spanning subset; vertices carry many dependent
  // active constraints
  Eigen::MatrixXd all(dim, active.size());
  for (size_t i = 0; i < active.size(); ++i) all.col(i) = nulls[active[i]];
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(all);
  qr.setThreshold(1e-9);
  const int m = static_cast<int>(qr.rank());
  if (m < 2) return std::nullopt;
  Eigen::MatrixXd span(dim, m);
  for (int i = 0; i < m; ++i) span.col(i) = all.col(qr.colsPermutation().indices()[i]);

  Eigen::MatrixXd gram(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) gram(i, j) = qdot(span.col(i), span.col(j), 2);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  lu.setThreshold(1e-10);
  if (!lu.isInvertible()) return std::nullopt;

  Eigen::VectorXd rhs(m);
  for (int i = 0; i < m; ++i) rhs[i] = qdot(span.col(i), x, 2);
  const Vec x_perp = x - span * lu.solve(rhs);
  const double q = qnorm(x_perp, 2);
  if (q >= -1e-14) return std::nullopt;
  const double mnorm = std::sqrt(-q);

  std::optional<SheetEval> best;
  for (const double sign : {1.0, -1.0}) {
    Vec z = sign * x_perp / mnorm;
    bool feasible = true;
    for (const auto& u : nulls)
      if (qdot(z, u, 2) > feas_tol) {
        feasible = false;
        break;
      }
    if (!feasible) continue;
    const double d = lorentz_distance_ads_raw(x, z);
    if (d <= 0.0) continue;
    const Vec dir = (x - std::cos(d) * z) / std::sin(d);
    if (!is_future_ads(z, dir)) continue;  // foot must lie in the past
    if (!best || d > best->tau) best = SheetEval{d, std::move(z)};
  }
  return best;
}

double ads_local_tau(const AdsDomain& dom, const Vec& x, const Vec& p_seed, Vec* foot_out) {
  const auto foot = refine_foot(dom, x, p_seed, 0.02);
  if (foot_out) *foot_out = foot.p;
  return foot.value;
}

}  // namespace detail

double cosmological_time(const AdsDomain& dom, const AdsLinearPoint& x) {
  if (!dom.contains_klein(x))
    throw std::domain_error("cosmological_time: point outside the domain");
  auto sr = multi_start_search(dom, x.x, 8);
  const auto active = dom.active_set_past(sr.best.p, kActiveTol);
  if (const auto sheet = detail::ads_sheet_eval(dom, active, x.x)) {
    if (std::abs(sheet->tau - sr.best.value) < 1e-4)
      return std::max(sheet->tau, sr.best.value);
  }
  return sr.best.value;
}

double reverse_cosmological_time(const AdsDomain& dom, const AdsLinearPoint& x) {
  return cosmological_time(dom.time_reflected(), AdsLinearPoint(reflect_time_ads(x.x)));
}

RealizingGeodesic realizing_geodesic(const AdsDomain& dom, const AdsLinearPoint& x) {
  if (!dom.contains_klein(x))
    throw std::domain_error("realizing_geodesic: point outside the domain");
  auto sr = multi_start_search(dom, x.x, 8);
  rescue_low_feet(dom, x.x, &sr);
  if (sr.best.value <= 1e-9 || sr.best.value >= M_PI / 2 - 1e-9)
    throw std::domain_error("realizing_geodesic: point not in the past tight region");
  if (foot_spread(sr.feet) > kFootTol)
    throw UniquenessViolation("realizing_geodesic: starts disagree on the foot");

  RealizingGeodesic rg;
  rg.length = sr.best.value;
  rg.active_set = dom.active_set_past(sr.best.p, kActiveTol);
  Vec z;
  if (!horizon_foot(dom, sr.best.p, &z))
    throw std::runtime_error("realizing_geodesic: foot escaped to the boundary");
  if (const auto sheet = detail::ads_sheet_eval(dom, rg.active_set, x.x)) {
    if (std::abs(sheet->tau - rg.length) < 1e-4 && sheet->tau >= rg.length - 1e-9) {
      rg.length = sheet->tau;
      z = sheet->foot;
    }
  }
  rg.foot_linear = z;
  rg.foot = linear_to_conformal(AdsLinearPoint(z));
  rg.direction = (x.x - std::cos(rg.length) * z) / std::sin(rg.length);
  return rg;
}

std::vector<LevelSample> level_sample(const AdsDomain& dom, double a, int count,
                                      std::uint64_t seed, int threads) {
  if (!(a > 0.0 && a < M_PI / 2))
    throw std::out_of_range("level_sample: a must lie in (0, pi/2)");
  std::vector<LevelSample> samples(count);
  parallel_for(count, threads, [&](int idx) {
    Rng rng = Rng::for_index(seed, idx);
    const int n = dom.n();
    for (int attempt = 0;; ++attempt) {
      if (attempt > 60) throw std::runtime_error("level_sample: no interior point found");
      Vec p = fold_upper(rng.unit_vector(n));
      const FBounds fb = dom.f_bounds(p);
      // seeds stay under the achronal-sphere ceiling, where the cosmological
      // time is regular and the tight-region structure applies
      const double gap = dom.graph_upper(p) - fb.lower;
      if (gap < 0.05) continue;
      const double beta = rng.uniform(0.1, 0.4) * std::pow(0.5, attempt / 10);
      const double t = fb.lower + beta * std::min(gap, 1.2);
      AdsLinearPoint x = conformal_to_linear({t, p});
      try {
        const RealizingGeodesic rg = realizing_geodesic(dom, x);
        LevelSample s;
        s.point = ads_exp_timelike(rg.foot_linear, rg.direction, a);
        s.normal = -std::sin(a) * rg.foot_linear + std::cos(a) * rg.direction;
        s.foot = rg.foot_linear;
        s.active_set = rg.active_set;
        samples[idx] = std::move(s);
        return;
      } catch (const UniquenessViolation&) {
        continue;
      } catch (const std::domain_error&) {
        continue;  // tau not in (0, pi/2) for this draw
      }
    }
  });
  return samples;
}

void write_level_csv(std::ostream& os, const AdsDomain& dom,
                     const std::vector<LevelSample>& samples, double a) {
  const int n = dom.n();
  os << "t";
  for (int i = 1; i < n; ++i) os << ",p" << i;
  os << ",tau\n";
  char buf[64];
  for (const auto& s : samples) {
    const AdsConformalPoint c = linear_to_conformal(AdsLinearPoint(s.point));
    std::snprintf(buf, sizeof buf, "%.12g", c.t);
    os << buf;
    for (int i = 0; i + 1 < n; ++i) {
      std::snprintf(buf, sizeof buf, "%.12g", c.p[i]);
      os << ',' << buf;
    }
    std::snprintf(buf, sizeof buf, "%.12g", a);
    os << ',' << buf << '\n';
  }
}

LevelOracle make_ads_level_oracle(const AdsDomain& dom, const LevelSample& sample) {
  // closed form on the sample's active sheet when the stratum is regular
  if (detail::ads_sheet_eval(dom, sample.active_set, sample.point)) {
    const AdsDomain* d = &dom;
    const auto active = sample.active_set;
    LevelOracle oracle;
    oracle.tau = [d, active](const Vec& y) {
      const auto ev = detail::ads_sheet_eval(*d, active, y);
      return ev ? ev->tau : std::numeric_limits<double>::quiet_NaN();
    };
    oracle.feasible = [d, active](const Vec& y) {
      return detail::ads_sheet_eval(*d, active, y).has_value();
    };
    return oracle;
  }
  // degenerate stratum: warm-started local refinement (value-accurate)
  const AdsDomain* d = &dom;
  const Vec p_seed = linear_to_conformal(AdsLinearPoint(sample.foot)).p;
  LevelOracle oracle;
  oracle.tau = [d, p_seed](const Vec& y) { return detail::ads_local_tau(*d, y, p_seed, nullptr); };
  oracle.feasible = [](const Vec&) { return true; };
  return oracle;
}

}  // namespace cct
