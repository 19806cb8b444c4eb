#pragma once

#include <vector>

#include <Eigen/Dense>

namespace cct {

using Vec = Eigen::VectorXd;

/// Signature of a pseudo-Euclidean form on R^{n+1}: `negatives` leading minus
/// signs (time directions first), plus signs after. Only (1,n) and (2,n-1)
/// are supported.
struct Signature {
  int negatives = 1;
  int dimension = 3;

  bool operator==(const Signature&) const = default;
};

Signature ads_signature(int n);  // (2, n-1) form on R^{n+1}
Signature ds_signature(int n);   // (1, n) form on R^{n+1}

void validate_signature(const Signature& sig);

/// Vector of R^{n+1} carrying its quadratic-form signature.
struct AmbientVector {
  Vec x;
  Signature sig;
};

enum class CausalClass { Timelike, Null, Spacelike };

/// Pseudo-scalar product: sum eps_i x_i y_i with eps_i = -1 on the first
/// `negatives` coordinates, +1 after. Throws on signature mismatch.
double inner(const AmbientVector& a, const AmbientVector& b);

/// Unchecked form of the pseudo-scalar product for internal hot paths.
double qdot(const Vec& a, const Vec& b, int negatives);
inline double qnorm(const Vec& a, int negatives) { return qdot(a, a, negatives); }

/// Sign of the form with a tolerance band relative to the coordinate scale.
/// Throws on the zero vector.
CausalClass classify(const AmbientVector& v);
CausalClass classify(const Vec& v, int negatives);

/// Positive-homothety equality on S(R^{n+1}): y = lambda x for lambda > 0,
/// tested on unit-Euclidean-norm representatives. Antipodes are distinct.
bool projective_equal(const AmbientVector& a, const AmbientVector& b);
bool projective_equal(const Vec& a, const Vec& b);

/// Canonical ray representative: the unit-Euclidean-norm vector on the same
/// positive ray. The sign is kept as-is; S(R^{n+1}) separates antipodes.
Vec projective_normalize(const Vec& v);

/// Q-orthonormal spacelike frame spanning the Q-orthogonal complement of
/// `span_vectors`. The form restricted to that complement must be positive
/// definite (the caller guarantees this, e.g. complement of {point, normal}
/// on a quadric). Uses column-pivoted Gram-Schmidt in the Q metric.
std::vector<Vec> spacelike_complement_frame(const std::vector<Vec>& span_vectors,
                                            int negatives, int want);

inline constexpr double kTolNull = 1e-9;
inline constexpr double kTolProj = 1e-9;

}  // namespace cct
