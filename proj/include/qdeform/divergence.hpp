#ifndef QDEFORM_DIVERGENCE_HPP
#define QDEFORM_DIVERGENCE_HPP

#include "qdeform/prob_vector.hpp"
#include "qdeform/qalgebra.hpp"

namespace qdeform {

// D_q(p||r) = sum_i p_i ln_{2-q}(p_i/r_i) = (1 - sum_i p_i^q r_i^{1-q})/(1-q).
// Kullback-Leibler divergence at q == 1. Terms with p_i = 0 contribute 0;
// p_i > 0 with r_i = 0 raises ErrorKind::Support. Nonnegative for index
// in (0, 2), zero iff p = r.
double q_divergence(const DeformationParameter& param, const ProbVector& p,
                    const ProbVector& r);

// Three-branch alpha-divergence:
//   (4/(1-alpha^2)) (1 - sum p_i^{(1-alpha)/2} r_i^{(1+alpha)/2})   (alpha != +-1)
//   sum r_i ln(r_i/p_i)                                             (alpha = 1)
//   sum p_i ln(p_i/r_i)                                             (alpha = -1)
// with branch threshold |alpha -+ 1| < 1e-8.
double alpha_divergence(double alpha, const ProbVector& p, const ProbVector& r);

// Exact affine maps q = (1-alpha)/2, alpha = 1 - 2q. With validate set,
// images outside (0,2) resp. (-3,1) raise ErrorKind::Range.
double q_from_alpha(double alpha, bool validate = false);
double alpha_from_q(double q, bool validate = false);

// Rate function of the generalized large-deviation principle:
//   I(x) = D_{2-q}((x,1-x) || (r,1-r)) / (2-q),
// the limit statistic being -I(x). Convergent for 0 < q < 1; evaluable
// on all of (0,2) as a diagnostic.
double rate_function(const DeformationParameter& param, double x, double r);

// The alpha-geometry indices of the corollary: under q = (1-alpha)/2 the
// q-log weight scales as n^{(3+alpha)/2} times the divergence of index
// -2-alpha; scaling_exponent + q == 2.
struct CorollaryIndexMap {
  double scaling_exponent;
  double divergence_index;
};
CorollaryIndexMap corollary_index_map(double alpha);

}  // namespace qdeform

#endif
