#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cct/ads_cosmo_time.hpp"
#include "cct/ds_domains.hpp"

namespace cct {

enum class QuadricKind { Ads, Ds };

/// Implicit description of a spacelike hypersurface near a base point: g is
/// smooth with zero level equal to the surface, feasible() rejects points
/// where the description stops being valid (active set change, edge shadow).
struct SurfaceOracle {
  std::function<double(const Vec&)> g;
  std::function<bool(const Vec&)> feasible = [](const Vec&) { return true; };
};

struct CurvatureEstimate {
  double H = 0.0;
  double residual = 0.0;  // RMS deviation of the sampled heights from the fit
  bool ok = false;        // projection succeeded on the whole stencil
};

/// Mean curvature by quadratic fit of the geodesic graph of the surface over
/// its tangent space at x: offsets +-h e_i and +-h (e_i +- e_j)/sqrt(2),
/// height u along the future normal from 1D root finding of g, fit
/// u = <linear> + delta^T M delta / 2, and H = -tr(M)/(n-1) under the
/// convention II(X,Y) = <nu, nabla_X Y> with nu the future unit normal.
/// Second order accurate in h on analytic surfaces.
CurvatureEstimate estimate_mean_curvature(const SurfaceOracle& oracle, const Vec& x,
                                          const Vec& future_normal, double h,
                                          QuadricKind kind);

enum class LevelModel { Ads, AdsReverse, Ds, DsReverse };

struct SampleRecord {
  Vec point;
  double H = 0.0;
  double residual = 0.0;
  bool accepted = false;
};

struct LevelBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Mean-curvature envelope of the level set tau = a predicted by the
/// comparison-surface estimates for each model.
LevelBounds level_bounds(LevelModel model, int n, double a);

struct CurvatureReport {
  LevelModel model = LevelModel::Ads;
  int n = 3;
  double a = 0.0;
  std::vector<SampleRecord> samples;
  int accepted_count = 0;
  double accepted_fraction = 0.0;
  double h_min = 0.0, h_max = 0.0;  // over accepted samples
  LevelBounds bounds;
  double slack = 5e-3;
  bool lower_ok = true, upper_ok = true;
  bool bounds_ok() const { return lower_ok && upper_ok; }
};

struct InsufficientData : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Samples the tau-level (reverse models measure the reflected domain and
/// flip the sign of H), estimates H at each accepted sample and checks the
/// envelope with the given slack. Throws InsufficientData when no sample
/// passes the filters.
CurvatureReport verify_level_bounds(const AdsDomain& dom, LevelModel model, double a,
                                    int samples, std::uint64_t seed, int threads = 1,
                                    double h = 1e-3);
CurvatureReport verify_level_bounds(const DsBoundarySet& bs, LevelModel model, double a,
                                    int samples, std::uint64_t seed, int threads = 1,
                                    double h = 1e-3);

struct BarrierProbe {
  double a = 0.0;
  double h_min = 0.0, h_max = 0.0;
  double accepted_fraction = 0.0;
  bool bounds_ok = false;
};

enum class CmcVerdict { Global, Partial, None };

struct BarrierReport {
  std::vector<BarrierProbe> past;    // probes toward the past end
  std::vector<BarrierProbe> future;  // probes toward the future end
  bool past_found = false;
  bool future_found = false;
  CmcVerdict verdict = CmcVerdict::None;
  double alpha = 0.0;  // -inf encoded as -HUGE_VAL
  double beta = 0.0;   // +inf as +HUGE_VAL; empirical envelope peak for Partial
  bool envelope_monotone = true;
};

/// Probes cosmological levels toward both ends and applies the constant
/// curvature k verdict logic: k = -1 needs both barrier sequences; k = +1
/// additionally needs the future envelope to stay below -1 (gap condition),
/// which fails exactly when the envelope re-enters [-1, inf).
BarrierReport barrier_scan(const AdsDomain& dom, const std::vector<double>& a_list,
                           const std::vector<double>& b_list, int samples, std::uint64_t seed,
                           int threads = 1);
BarrierReport barrier_scan(const DsBoundarySet& bs, const std::vector<double>& a_list,
                           const std::vector<double>& b_list, int samples, std::uint64_t seed,
                           int threads = 1);

std::string to_string(LevelModel model);
std::string to_string(CmcVerdict verdict);

}  // namespace cct
