#include "cct/optim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace cct {

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& x0, const NelderMeadOptions& opts) {
  const int n = static_cast<int>(x0.size());
  const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

  std::vector<Eigen::VectorXd> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  for (int i = 0; i < n; ++i) pts[i + 1][i] += opts.initial_step;
  for (int i = 0; i <= n; ++i) vals[i] = f(pts[i]);

  auto order = [&]() {
    std::vector<int> idx(n + 1);
    for (int i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return vals[a] < vals[b]; });
    std::vector<Eigen::VectorXd> p2(n + 1);
    std::vector<double> v2(n + 1);
    for (int i = 0; i <= n; ++i) {
      p2[i] = pts[idx[i]];
      v2[i] = vals[idx[i]];
    }
    pts.swap(p2);
    vals.swap(v2);
  };

  int iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    order();
    double diam = 0.0;
    for (int i = 1; i <= n; ++i) diam = std::max(diam, (pts[i] - pts[0]).norm());
    if (diam <= opts.xtol) break;
    if (opts.ftol > 0.0 && std::abs(vals[n] - vals[0]) <= opts.ftol) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) centroid += pts[i];
    centroid /= n;

    Eigen::VectorXd xr = centroid + alpha * (centroid - pts[n]);
    const double fr = f(xr);
    if (fr < vals[0]) {
      Eigen::VectorXd xe = centroid + gamma * (centroid - pts[n]);
      const double fe = f(xe);
      if (fe < fr) {
        pts[n] = xe;
        vals[n] = fe;
      } else {
        pts[n] = xr;
        vals[n] = fr;
      }
    } else if (fr < vals[n - 1]) {
      pts[n] = xr;
      vals[n] = fr;
    } else {
      Eigen::VectorXd xc = centroid + rho * (pts[n] - centroid);
      const double fc = f(xc);
      if (fc < vals[n]) {
        pts[n] = xc;
        vals[n] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          pts[i] = pts[0] + sigma * (pts[i] - pts[0]);
          vals[i] = f(pts[i]);
        }
      }
    }
  }
  order();
  return {pts[0], vals[0], iter};
}

SphereChart::SphereChart(const Eigen::VectorXd& p) : p0(p.normalized()) {
  const int dim = static_cast<int>(p0.size());
  // Householder complement of p0
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim, dim);
  Eigen::VectorXd w = p0;
  w[0] += (p0[0] >= 0 ? 1.0 : -1.0);
  Eigen::MatrixXd h = id - 2.0 * (w * w.transpose()) / w.squaredNorm();
  basis = h.rightCols(dim - 1);
}

Eigen::VectorXd SphereChart::map(const Eigen::VectorXd& xi) const {
  Eigen::VectorXd v = p0 + basis * xi;
  return v.normalized();
}

std::vector<Eigen::VectorXd> sphere_grid(int dim, int count) {
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(count);
  if (dim == 3) {
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * i;
      Eigen::VectorXd p(3);
      p << r * std::cos(phi), r * std::sin(phi), z;
      pts.push_back(p);
    }
  } else {
    Rng rng(0x5eedu + static_cast<std::uint64_t>(dim));
    for (int i = 0; i < count; ++i) pts.push_back(rng.unit_vector(dim));
  }
  return pts;
}

double find_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) throw std::runtime_error("find_root: root not bracketed");
  // bisection with secant acceleration
  double a = lo, b = hi, fa = flo, fb = fhi;
  for (int i = 0; i < 200; ++i) {
    double mid;
    if (std::abs(fb - fa) > 1e-300) {
      mid = b - fb * (b - a) / (fb - fa);  // secant
      if (!(mid > std::min(a, b) && mid < std::max(a, b))) mid = 0.5 * (a + b);
    } else {
      mid = 0.5 * (a + b);
    }
    const double fm = f(mid);
    if (fm == 0.0 || std::abs(b - a) < tol) return mid;
    if (fa * fm <= 0.0) {
      b = mid;
      fb = fm;
    } else {
      a = mid;
      fa = fm;
    }
  }
  return 0.5 * (a + b);
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  const int nthreads = std::min(threads, count);
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int t = 0; t < nthreads; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace cct
