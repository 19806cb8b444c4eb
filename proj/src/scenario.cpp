#include "cct/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <vector>

#include "json.hpp"

#include "cct/ads_cosmo_time.hpp"
#include "cct/curvature_meter.hpp"
#include "cct/ds_domains.hpp"
#include "cct/ds_foliations.hpp"
#include "cct/gauss_flow.hpp"
#include "cct/optim.hpp"
#include "cct/rng.hpp"

namespace cct {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

class Artifacts {
 public:
  Artifacts(std::filesystem::path dir, std::string scenario, std::uint64_t seed)
      : dir_(std::move(dir)), scenario_(std::move(scenario)), seed_(seed) {
    std::filesystem::create_directories(dir_);
  }

  std::ofstream open_csv(const std::string& name, const std::string& header) {
    std::ofstream os(dir_ / (scenario_ + "_" + name + ".csv"));
    os << "#scenario " << scenario_ << "\n#seed " << seed_ << "\n#version " << kVersion << "\n";
    os << header << "\n";
    return os;
  }

  void write_json(const std::string& name, const json& j) {
    std::ofstream os(dir_ / (scenario_ + "_" + name + ".json"));
    os << j.dump(2) << "\n";
  }

 private:
  std::filesystem::path dir_;
  std::string scenario_;
  std::uint64_t seed_;
};

struct DomainSpec {
  std::optional<AdsDomain> ads;
  std::optional<DsBoundarySet> ds;

  int n() const { return ads ? ads->n() : ds->n(); }
};

DomainSpec parse_domain(const json& j) {
  DomainSpec spec;
  const std::string model = j.at("model").get<std::string>();
  if (model == "ads") {
    spec.ads.emplace(AdsDomain(achronal_from_json(j.dump())));
  } else if (model == "ds") {
    spec.ds.emplace(ds_boundary_from_json(j.dump()));
  } else {
    throw std::invalid_argument("scenario: domain model must be \"ads\" or \"ds\"");
  }
  return spec;
}

struct TaskOutcome {
  std::string name;
  bool pass = true;
  std::string note;
};

TaskOutcome run_tau_profile(const json& task, const DomainSpec& dom, Artifacts& artifacts,
                            std::uint64_t seed, int threads) {
  const int count = task.value("count", 100);
  TaskOutcome outcome;
  outcome.name = "tau_profile";
  if (dom.ads) {
    const auto& d = *dom.ads;
    std::vector<std::array<double, 3>> rows(count);  // t, tau, tau_hat
    std::vector<Vec> ps(count);
    parallel_for(count, threads, [&](int i) {
      Rng rng = Rng::for_index(seed, i);
      const int n = d.n();
      for (;;) {
        Vec p = rng.unit_vector(n);
        p[n - 1] = std::abs(p[n - 1]);
        const FBounds fb = d.f_bounds(p);
        const double gap = d.graph_upper(p) - fb.lower;
        if (gap < 0.05) continue;
        const double t = fb.lower + rng.uniform(0.2, 0.8) * std::min(gap, 1.2);
        AdsLinearPoint x = conformal_to_linear({t, p});
        rows[i] = {t, cosmological_time(d, x), reverse_cosmological_time(d, x)};
        ps[i] = p;
        return;
      }
    });
    std::ostringstream header;
    header << "t";
    for (int i = 1; i < d.n(); ++i) header << ",p" << i;
    header << ",tau,tau_hat";
    auto os = artifacts.open_csv("tau_profile", header.str());
    for (int i = 0; i < count; ++i) {
      os << fmt(rows[i][0]);
      for (int k = 0; k + 1 < d.n(); ++k) os << ',' << fmt(ps[i][k]);
      os << ',' << fmt(rows[i][1]) << ',' << fmt(rows[i][2]) << "\n";
    }
    outcome.note = "points=" + std::to_string(count);
  } else {
    const auto& bs = *dom.ds;
    std::vector<Vec> xs(count);
    std::vector<double> taus(count);
    parallel_for(count, threads, [&](int i) {
      Rng rng = Rng::for_index(seed, i);
      for (;;) {
        Vec c = rng.unit_vector(bs.n());
        const double rmax = bs.horizon_radius(c);
        if (rmax < 1e-3) continue;
        DsPoint x = point_of_ball({c, rng.uniform(0.3, 0.8) * rmax});
        xs[i] = x.x;
        taus[i] = cosmological_time_ds(bs, x);
        return;
      }
    });
    std::ostringstream header;
    for (int i = 0; i <= bs.n(); ++i) header << (i ? "," : "") << "x" << (i + 1);
    header << ",tau";
    auto os = artifacts.open_csv("tau_profile", header.str());
    for (int i = 0; i < count; ++i) {
      for (int k = 0; k <= bs.n(); ++k) os << (k ? "," : "") << fmt(xs[i][k]);
      os << ',' << fmt(taus[i]) << "\n";
    }
    outcome.note = "points=" + std::to_string(count);
  }
  return outcome;
}

TaskOutcome run_level_curvature(const json& task, const DomainSpec& dom, Artifacts& artifacts,
                                std::uint64_t seed, int threads) {
  const auto a_list = task.at("a_list").get<std::vector<double>>();
  const int samples = task.value("samples", 16);
  const bool reverse = task.value("reverse", false);
  TaskOutcome outcome;
  outcome.name = "level_curvature";
  auto os = artifacts.open_csv("level_curvature", "a,H_min,H_max,accepted_fraction");
  int violations = 0;
  std::uint64_t salt = 0;
  for (const double a : a_list) {
    CurvatureReport report =
        dom.ads ? verify_level_bounds(*dom.ads,
                                      reverse ? LevelModel::AdsReverse : LevelModel::Ads, a,
                                      samples, seed + ++salt, threads)
                : verify_level_bounds(*dom.ds, reverse ? LevelModel::DsReverse : LevelModel::Ds,
                                      a, samples, seed + ++salt, threads);
    os << fmt(a) << ',' << fmt(report.h_min) << ',' << fmt(report.h_max) << ','
       << fmt(report.accepted_fraction) << "\n";
    if (!report.bounds_ok()) ++violations;
  }
  if (violations > 0) {
    outcome.pass = false;
    outcome.note = std::to_string(violations) + " level(s) violate the curvature bounds";
  } else {
    outcome.note = "levels=" + std::to_string(a_list.size());
  }
  return outcome;
}

json probe_json(const BarrierProbe& p) {
  return {{"a", p.a},
          {"H_min", p.h_min},
          {"H_max", p.h_max},
          {"accepted_fraction", p.accepted_fraction},
          {"bounds_ok", p.bounds_ok}};
}

TaskOutcome run_barrier_scan(const json& task, const DomainSpec& dom, Artifacts& artifacts,
                             std::uint64_t seed, int threads) {
  const auto a_list = task.at("a_list").get<std::vector<double>>();
  const auto b_list = task.at("b_list").get<std::vector<double>>();
  const int samples = task.value("samples", 12);
  TaskOutcome outcome;
  outcome.name = "barrier_scan";
  const BarrierReport report =
      dom.ads ? barrier_scan(*dom.ads, a_list, b_list, samples, seed, threads)
              : barrier_scan(*dom.ds, a_list, b_list, samples, seed, threads);

  std::string verdict = to_string(report.verdict);
  json j{{"cmc_time_verdict", verdict},
         {"past_sequence_found", report.past_found},
         {"future_sequence_found", report.future_found},
         {"envelope_monotone", report.envelope_monotone},
         {"alpha", std::isinf(report.alpha) ? json("-inf") : json(report.alpha)},
         {"beta", std::isinf(report.beta) ? json("+inf") : json(report.beta)},
         {"past_probes", json::array()},
         {"future_probes", json::array()}};
  for (const auto& p : report.past) j["past_probes"].push_back(probe_json(p));
  for (const auto& p : report.future) j["future_probes"].push_back(probe_json(p));
  artifacts.write_json("barrier_scan", j);
  outcome.note = "verdict=" + verdict + (report.envelope_monotone ? "" : " (non-monotone)");
  return outcome;
}

TaskOutcome run_foliation_check(const json& task, Artifacts& artifacts) {
  const FoliationCurve curve = foliation_curve_from_json(task.dump());
  const int samples = task.value("samples", 256);
  const FoliationVerdict verdict = validate_foliation(curve, samples);
  TaskOutcome outcome;
  outcome.name = "foliation_check";
  std::string status;
  switch (verdict.status) {
    case FoliationStatus::Ok: status = "ok"; break;
    case FoliationStatus::NotTimelike: status = "not_timelike"; break;
    case FoliationStatus::LeavesIntersect: status = "leaves_intersect"; break;
  }
  artifacts.write_json("foliation_check",
                       {{"status", status},
                        {"index_i", verdict.i},
                        {"index_j", verdict.j},
                        {"marginal", verdict.marginal},
                        {"discrete_timelike_ok", verdict.discrete_timelike_ok},
                        {"disjoint_ok", verdict.disjoint_ok},
                        {"checks_agree", verdict.discrete_timelike_ok == verdict.disjoint_ok}});
  outcome.note = "status=" + status;
  return outcome;
}

TaskOutcome run_gauss_flow(const json& task, const DomainSpec& dom, Artifacts& artifacts,
                           std::uint64_t seed) {
  const double lambda = task.value("lambda", -2.0);
  const auto t_list = task.at("t_list").get<std::vector<double>>();
  const int n = task.value("n", dom.n());
  TaskOutcome outcome;
  outcome.name = "gauss_flow";
  if (!(lambda < -1.0)) {
    outcome.pass = false;
    outcome.note = "seed shape not almost-fuchsian";
    return outcome;
  }
  // fuchsian seed: distance sphere with principal curvatures lambda
  const double a0 = std::atanh(-1.0 / lambda);
  Vec p = Vec::Zero(n + 1);
  p[n] = 1.0;
  ImmersedPatch patch = distance_sphere_patch(p, a0, 8, seed);
  auto os = artifacts.open_csv("gauss_flow", "t,H,lambda_t");
  bool all_below = true;
  for (const double t : t_list) {
    const Eigen::MatrixXd bt = weingarten_evolution(patch.samples[0].shape, t);
    const double h = mean_curvature_of_shape(bt);
    os << fmt(t) << ',' << fmt(h) << ',' << fmt(bt(0, 0)) << "\n";
    if (!(h < -1.0)) all_below = false;
  }
  if (!all_below) {
    outcome.pass = false;
    outcome.note = "flowed mean curvature left (-inf, -1)";
  } else {
    outcome.note = "lambda=" + fmt(lambda);
  }
  return outcome;
}

TaskOutcome run_counterexample(const json& task, Artifacts& artifacts) {
  const int n = task.at("n").get<int>();
  const auto a_grid = task.at("a_grid").get<std::vector<double>>();
  const CounterexampleProfile profile = counterexample_profile(n, a_grid);
  auto os = artifacts.open_csv("counterexample", "a,H");
  for (const auto& pt : profile.values) os << fmt(pt.a) << ',' << fmt(pt.H) << "\n";
  artifacts.write_json("counterexample",
                       {{"n", n},
                        {"monotone", profile.monotone},
                        {"a_max", std::isinf(profile.a_max) ? json("+inf") : json(profile.a_max)},
                        {"H_max", profile.h_max}});
  TaskOutcome outcome;
  outcome.name = "counterexample";
  outcome.note = profile.monotone ? "monotone" : "non-monotone";
  return outcome;
}

}  // namespace

int run_scenario(const std::filesystem::path& scenario_file, const RunOptions& options) {
  json spec;
  std::optional<DomainSpec> dom;
  std::string name;
  std::uint64_t seed = 0;
  try {
    std::ifstream is(scenario_file);
    if (!is) {
      std::cerr << "error: cannot open scenario file " << scenario_file << "\n";
      return 1;
    }
    spec = json::parse(is);
    name = spec.value("name", scenario_file.stem().string());
    if (!spec.contains("seed")) {
      std::cerr << "error: scenario field \"seed\" is mandatory\n";
      return 1;
    }
    seed = spec.at("seed").get<std::uint64_t>();
    if (!spec.contains("tasks") || !spec.at("tasks").is_array() || spec.at("tasks").empty()) {
      std::cerr << "error: scenario needs a non-empty \"tasks\" array\n";
      return 1;
    }
    if (spec.contains("domain")) dom = parse_domain(spec.at("domain"));
  } catch (const json::exception& e) {
    std::cerr << "error: scenario parse failed: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: invalid scenario: " << e.what() << "\n";
    return 1;
  }

  Artifacts artifacts(options.out_dir, spec.value("output", name), seed);
  std::vector<TaskOutcome> outcomes;
  int exit_code = 0;

  for (const auto& task : spec.at("tasks")) {
    std::string type;
    try {
      type = task.at("type").get<std::string>();
      const bool needs_domain = type == "tau_profile" || type == "level_curvature" ||
                                type == "barrier_scan" ||
                                (type == "gauss_flow" && !task.contains("n"));
      if (needs_domain && !dom) {
        std::cerr << "error: task " << type << " needs a scenario domain\n";
        return 1;
      }
      if (options.verbose) std::cout << "running task " << type << "...\n";
      if (type == "tau_profile")
        outcomes.push_back(run_tau_profile(task, *dom, artifacts, seed, options.threads));
      else if (type == "level_curvature")
        outcomes.push_back(run_level_curvature(task, *dom, artifacts, seed, options.threads));
      else if (type == "barrier_scan")
        outcomes.push_back(run_barrier_scan(task, *dom, artifacts, seed, options.threads));
      else if (type == "foliation_check")
        outcomes.push_back(run_foliation_check(task, artifacts));
      else if (type == "gauss_flow")
        outcomes.push_back(run_gauss_flow(task, dom ? *dom : DomainSpec{}, artifacts, seed));
      else if (type == "counterexample")
        outcomes.push_back(run_counterexample(task, artifacts));
      else {
        std::cerr << "error: unknown task type \"" << type << "\"\n";
        return 1;
      }
    } catch (const json::exception& e) {
      std::cerr << "error: task " << type << ": bad parameters: " << e.what() << "\n";
      return 1;
    } catch (const std::exception& e) {
      std::cerr << "task " << type << " failed: " << e.what() << "\n";
      outcomes.push_back({type, false, e.what()});
      exit_code = 2;
      continue;
    }
    if (!outcomes.back().pass) exit_code = 2;
  }

  std::cout << "scenario " << name << " (seed " << seed << ")\n";
  for (const auto& o : outcomes)
    std::cout << "  " << (o.pass ? "PASS" : "FAIL") << "  " << o.name
              << (o.note.empty() ? "" : "  [" + o.note + "]") << "\n";
  return exit_code;
}

}  // namespace cct
