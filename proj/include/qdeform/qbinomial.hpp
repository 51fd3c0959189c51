#ifndef QDEFORM_QBINOMIAL_HPP
#define QDEFORM_QBINOMIAL_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qdeform/qcombinatorics.hpp"

namespace qdeform {

// Normalization of the generalized binomial distribution.
//
// ExactCq:  solve sum_k exp_q(S_k + t) = 1 for t = ln_q C_q by bracketed
//           bisection; the formal normalization of the definition.
// MaxShift: subtract the maximum q-log weight (the peak weight becomes
//           exactly 1, immune to overflow) and normalize linearly.
// The two coincide at q = 1 and differ for q != 1.
enum class NormalizationMode { ExactCq, MaxShift };

struct QBinomialSpec {
  QBinomialSpec(DeformationParameter param, std::uint64_t n, double r,
                NormalizationMode mode = NormalizationMode::MaxShift);

  DeformationParameter param;
  std::uint64_t n;
  double r;
  NormalizationMode mode;
};

struct NormalizationMeta {
  NormalizationMode mode;
  // t = ln_q C_q for ExactCq, the subtracted maximum weight for MaxShift.
  double value;
};

// Unnormalized q-log weight
//   S_k = ln_q C(n,k)_q + [k^{2-q} ln_{2-q} r + (n-k)^{2-q} ln_{2-q}(1-r)]/(2-q),
// i.e. the right-hand side of the distribution's defining q-log identity
// without the ln_q C_q term.  Boundary terms use 0^{2-q} * (finite) = 0,
// so S_0 and S_n are finite.
double qlog_weight(const QBinomialSpec& spec, const QFactorialTable& table,
                   std::uint64_t k);

// All weights S_0..S_n in one pass.
std::vector<double> qlog_weights(const QBinomialSpec& spec, const QFactorialTable& table);

class QBinomialPmf {
public:
  QBinomialPmf(QBinomialSpec spec, std::vector<double> qlog_weights,
               std::vector<double> probs, NormalizationMeta meta,
               std::size_t peak_index, double sigma_q, std::vector<double> grid);

  const QBinomialSpec& spec() const noexcept { return spec_; }
  std::span<const double> qlog_weights() const noexcept { return qlog_weights_; }
  std::span<const double> probs() const noexcept { return probs_; }
  std::span<const double> grid() const noexcept { return grid_; }
  NormalizationMeta norm_meta() const noexcept { return meta_; }
  std::size_t peak_index() const noexcept { return peak_index_; }
  // sigma_q = n^{q/2} sqrt(r(1-r)), the fluctuation scale.
  double sigma_q() const noexcept { return sigma_q_; }
  std::size_t size() const noexcept { return probs_.size(); }

private:
  QBinomialSpec spec_;
  std::vector<double> qlog_weights_;
  std::vector<double> probs_;
  NormalizationMeta meta_;
  std::size_t peak_index_;
  double sigma_q_;
  std::vector<double> grid_;
};

// Builds the full distribution. Requires table.max_n() >= spec.n.
// Throws ErrorKind::Numeric if the ExactCq bracket cannot be established
// within 200 expansions.
QBinomialPmf build_pmf(const QBinomialSpec& spec, const QFactorialTable& table);

// probs[floor(n r)] -- the floor convention of the peak statistic, even
// when the neighbouring index carries slightly more mass.
double peak_probability(const QBinomialPmf& pmf);

// Second central difference of the q-log of the distribution at
// k = floor(n r) (unit step), estimating the continuous second derivative
// -1/(n^q r(1-r)). Computed on the stored q-log weights: under the exact
// normalization ln_q b_q(k) = S_k + ln_q C_q, the constant cancels in the
// second difference (a linear rescaling of probs would not).
double qlog_curvature(const QBinomialPmf& pmf);

// sum_{k <= floor(n x)} probs[k], compensated summation. Requires 0 < x < 1.
double cumulative_below(const QBinomialPmf& pmf, double x);

}  // namespace qdeform

#endif
