#include "cct/pseudo_linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace cct {

Signature ads_signature(int n) {
  Signature sig{2, n + 1};
  validate_signature(sig);
  return sig;
}

Signature ds_signature(int n) {
  Signature sig{1, n + 1};
  validate_signature(sig);
  return sig;
}

void validate_signature(const Signature& sig) {
  if (sig.negatives != 1 && sig.negatives != 2)
    throw std::invalid_argument("signature: negatives must be 1 or 2");
  if (sig.dimension < 3) throw std::invalid_argument("signature: dimension must be >= 3");
}

double qdot(const Vec& a, const Vec& b, int negatives) {
  const int k = negatives;
  return a.tail(a.size() - k).dot(b.tail(b.size() - k)) - a.head(k).dot(b.head(k));
}

double inner(const AmbientVector& a, const AmbientVector& b) {
  if (!(a.sig == b.sig)) throw std::invalid_argument("inner: signature mismatch");
  if (a.x.size() != a.sig.dimension || b.x.size() != b.sig.dimension)
    throw std::invalid_argument("inner: vector size does not match signature dimension");
  return qdot(a.x, b.x, a.sig.negatives);
}

CausalClass classify(const Vec& v, int negatives) {
  const double scale = v.squaredNorm();
  if (scale == 0.0) throw std::invalid_argument("classify: zero vector");
  const double q = qdot(v, v, negatives);
  const double band = kTolNull * scale;
  if (q < -band) return CausalClass::Timelike;
  if (q > band) return CausalClass::Spacelike;
  return CausalClass::Null;
}

CausalClass classify(const AmbientVector& v) { return classify(v.x, v.sig.negatives); }

Vec projective_normalize(const Vec& v) {
  const double norm = v.norm();
  if (norm == 0.0) throw std::invalid_argument("projective_normalize: zero vector");
  return v / norm;
}

bool projective_equal(const Vec& a, const Vec& b) {
  return (projective_normalize(a) - projective_normalize(b)).norm() <= kTolProj;
}

bool projective_equal(const AmbientVector& a, const AmbientVector& b) {
  if (!(a.sig == b.sig)) throw std::invalid_argument("projective_equal: signature mismatch");
  return projective_equal(a.x, b.x);
}

std::vector<Vec> spacelike_complement_frame(const std::vector<Vec>& span_vectors,
                                            int negatives, int want) {
  if (span_vectors.empty()) throw std::invalid_argument("complement frame: empty span");
  const int dim = static_cast<int>(span_vectors.front().size());

  // Q-Gram matrix of the span; it must be invertible for Q-projection.
  const int m = static_cast<int>(span_vectors.size());
  Eigen::MatrixXd gram(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) gram(i, j) = qdot(span_vectors[i], span_vectors[j], negatives);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  if (!lu.isInvertible())
    throw std::invalid_argument("complement frame: degenerate span");

  auto project_out = [&](const Vec& w) {
    Eigen::VectorXd rhs(m);
    for (int i = 0; i < m; ++i) rhs[i] = qdot(span_vectors[i], w, negatives);
    Eigen::VectorXd c = lu.solve(rhs);
    Vec r = w;
    for (int i = 0; i < m; ++i) r -= c[i] * span_vectors[i];
    return r;
  };

  std::vector<Vec> frame;
  std::vector<Vec> candidates;
  for (int i = 0; i < dim; ++i) {
    Vec e = Vec::Zero(dim);
    e[i] = 1.0;
    candidates.push_back(project_out(e));
  }
  for (int k = 0; k < want; ++k) {
    // column pivoting: take the candidate with the largest remaining Q norm
    int best = -1;
    double best_q = 1e-12;
    for (int i = 0; i < static_cast<int>(candidates.size()); ++i) {
      const double q = qnorm(candidates[i], negatives);
      if (q > best_q) {
        best_q = q;
        best = i;
      }
    }
    if (best < 0) throw std::runtime_error("complement frame: rank deficiency");
    Vec e = candidates[best] / std::sqrt(best_q);
    frame.push_back(e);
    for (auto& c : candidates) c -= qdot(e, c, negatives) * e;
  }
  return frame;
}

}  // namespace cct
