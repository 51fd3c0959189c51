#ifndef QDEFORM_QCOMBINATORICS_HPP
#define QDEFORM_QCOMBINATORICS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qdeform/prob_vector.hpp"
#include "qdeform/qalgebra.hpp"

namespace qdeform {

// Exact q-log factorials via the prefix sums
//   prefix[n] = sum_{k=1..n} ln_q k   (prefix[0] = 0, the empty product).
// Sums are accumulated in long double with Kahan compensation so that
// consecutive differences reproduce ln_q n to full double precision.
// Immutable after construction; safe to share across threads.
class QFactorialTable {
public:
  QFactorialTable(DeformationParameter param, std::size_t max_n);

  const DeformationParameter& param() const noexcept { return param_; }
  std::size_t max_n() const noexcept { return prefix_.size() - 1; }

  // ln_q n!_q, exact up to rounding.
  double q_ln_factorial(std::size_t n) const;
  long double q_ln_factorial_ld(std::size_t n) const;

  // ln_q of the q-binomial coefficient: prefix[n] - (prefix[k] + prefix[n-k]).
  double q_ln_binomial_coeff(std::size_t n, std::size_t k) const;

  // ln_q of the q-multinomial coefficient: prefix[n] - sum_i prefix[parts_i].
  // Throws ErrorKind::Constraint when the parts do not sum to n.
  double q_ln_multinomial_coeff(std::size_t n, std::span<const std::uint64_t> parts) const;

private:
  DeformationParameter param_;
  std::vector<long double> prefix_;
};

// c_q of the refined q-Stirling formula, estimated from the defect
//   d(m) = ln_q m!_q - [(m/(2-q) + 1/2) ln_q m - m/(2-q)]
// at m = n_ref and 2 n_ref.  d(m) = c_q + O(m^{-q}); the two-point
// Richardson step removes the leading O(m^{-q}) bias, and
// residual_bound = |d(2n_ref) - d(n_ref)| / (1 - 2^{-q}) bounds the bias
// of the raw single-point estimate.
struct StirlingConstant {
  double q;
  double c_q;
  std::size_t estimation_n;
  double residual_bound;
};

// Leading form: (n/(2-q)) ln_q n - n/(2-q).
double stirling_leading(const DeformationParameter& param, std::uint64_t n);

// Refined form: (n/(2-q) + 1/2) ln_q n - n/(2-q) + c_q.
double stirling_refined(const DeformationParameter& param, std::uint64_t n,
                        const StirlingConstant& c);

// ln_q n!_q - refined(n), evaluated in extended precision so the O(n^{-q})
// defect is resolved even where it sits far below ulp(ln_q n!_q).
double stirling_refined_defect(const QFactorialTable& table, std::size_t n,
                               const StirlingConstant& c);

// Requires n_ref >= 1000 and 2 n_ref <= table.max_n().
StirlingConstant estimate_c_q(const QFactorialTable& table, std::size_t n_ref);

// Tsallis entropy S_idx(p) = (1 - sum p_i^idx)/(idx - 1); Shannon entropy
// (natural units) at idx == 1. Components equal to zero contribute 0.
double tsallis_entropy(double entropic_index, std::span<const double> p);
double tsallis_entropy(const DeformationParameter& param, const ProbVector& p);

// Defect of the two-part entropy expansion of the q-binomial coefficient:
//   ln_q C(n,k)_q - [ -c_q + (ln_q n - ln_q k - ln_q(n-k))/2
//                     + n^{2-q}/(2-q) S_{2-q}(k/n, 1-k/n) ],
// which is O(n^{-q}).  c_q is estimated internally at n_ref = max_n/2,
// so the table must satisfy max_n >= 2000.
double binomial_entropy_residual(const QFactorialTable& table,
                                 const DeformationParameter& param,
                                 std::size_t n, std::size_t k);

}  // namespace qdeform

#endif
