#ifndef QDEFORM_QALGEBRA_HPP
#define QDEFORM_QALGEBRA_HPP

#include "qdeform/errors.hpp"

namespace qdeform {

enum class Regime { CompactSupport, ClassicalLimit, HeavyTail };

// Deformation parameter q restricted to the open interval (0, 2).
//
// regime() classifies against |q - 1| < classical_eps. The deformed
// evaluations below are written in expm1/log1p form, so they stay fully
// accurate arbitrarily close to q = 1; the exact classical formulas
// (ln, exp) take over only at q == 1, where the deformed expressions
// have a removable singularity.
class DeformationParameter {
public:
  explicit DeformationParameter(double q, double classical_eps = 1e-8);

  double q() const noexcept { return q_; }
  double classical_eps() const noexcept { return eps_; }
  Regime regime() const noexcept { return regime_; }
  bool classical() const noexcept { return regime_ == Regime::ClassicalLimit; }

  // Conjugate index 2 - q, which is again in (0, 2). The entropy index,
  // the divergence order and the probability-term logarithms of the
  // q-binomial weights all live at this dual index.
  DeformationParameter dual() const { return DeformationParameter(2.0 - q_, eps_); }

private:
  double q_;
  double eps_;
  Regime regime_;
};

// ln_q x = (x^{1-q} - 1)/(1-q).  Strictly increasing, ln_q 1 = 0.
// Requires x > 0.
double q_ln(const DeformationParameter& param, double x);

// exp_q x = [1 + (1-q) x]^{1/(1-q)}.
// Returns 0 when 1 + (1-q) x <= 0 and q < 1 (compact-support cutoff);
// throws ErrorKind::Domain at that boundary for q > 1 (divergent power).
double q_exp(const DeformationParameter& param, double x);

// x (x)_q y = [x^{1-q} + y^{1-q} - 1]^{1/(1-q)}, the multiplication that
// makes ln_q a homomorphism: ln_q(x (x)_q y) = ln_q x + ln_q y.
// Requires x, y > 0 and x^{1-q} + y^{1-q} - 1 > 0.
double q_product(const DeformationParameter& param, double x, double y);

namespace detail {

// Shared power kernel: b^e evaluated as exp(e ln b), with b == 0 handled
// explicitly. Every general power in the library goes through here.
double pow_eln(double base, double expo);
long double pow_eln_ld(long double base, long double expo);

// b^e - 1 without cancellation (expm1 form); b > 0.
double pow_eln_m1(double base, double expo);

// Deformed log/exp on a raw index, no parameter validation.
double q_ln_raw(double q, double x);
long double q_ln_raw_ld(double q, long double x);
double q_exp_raw(double q, double x);

}  // namespace detail

}  // namespace qdeform

#endif
