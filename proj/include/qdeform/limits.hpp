#ifndef QDEFORM_LIMITS_HPP
#define QDEFORM_LIMITS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "qdeform/divergence.hpp"
#include "qdeform/qbinomial.hpp"

namespace qdeform {

struct LdpEntry {
  std::uint64_t n;
  double scaled_stat;
};

struct LdpSeries {
  DeformationParameter param;
  double r;
  double x;
  std::vector<LdpEntry> entries;  // strictly increasing in n
  double target;                  // -rate_function(param, x, r)
};

struct CltResidualEntry {
  std::uint64_t k;
  double x;
  double residual;
};

struct CltResidualReport {
  DeformationParameter param;
  double r;
  std::uint64_t n;
  double window;
  std::vector<CltResidualEntry> residuals;
  double max_abs_residual;
};

struct QGaussianFit {
  double q;
  double beta;       // > 0
  double amplitude;  // > 0
  double sup_error;
  double window;
};

struct DensityPoint {
  double x;
  double g;
};

struct DecayPoint {
  std::uint64_t n;
  double max_abs_residual;
};

// The scaled q-log tail statistic (1/n^{2-q}) ln_q P(mean < x).
//
// Evaluated in the q-log weight domain, where the theorem's algebra lives:
// at q == 1 it is the exact log of the normalized cumulative (classical
// log-sum-exp); for q != 1 it is the dominant boundary weight
// (max_{k <= floor(nx)} S_k - max_k S_k) / n^{2-q}, the bounding term of
// the cumulative, tight to O(1/n) in the scaled statistic. Probability-
// domain evaluation is impossible away from toy sizes: for q < 1 the
// normalized tail mass is exactly zero beyond the compact-support cutoff,
// and for q = 1 it underflows (e.g. exp(-822) at n = 10^4, x = 0.3).
double ldp_scaled_statistic(const QBinomialSpec& spec, const QFactorialTable& table,
                            double x);

// Fills entries over an increasing n list and sets target = -rate(x).
// Convergence to the target holds for 0 < q < 1 (the theorem's regime);
// for q >= 1 the series is a diagnostic only.
LdpSeries ldp_convergence_series(const DeformationParameter& param, double r,
                                 double x, std::span<const std::uint64_t> n_list);

// Residuals of the local limit expansion over the window |x_k| <= L:
//   residual_k = (S_k - S_{floor(nr)}) + x_k^2 / 2,
// identically q_ln b_q(k) - q_ln P_n^* + x_k^2/2 under exact normalization
// (the ln_q C_q term cancels). Requires >= 5 grid points in the window.
CltResidualReport clt_residuals(const QBinomialSpec& spec, const QFactorialTable& table,
                                double window);

// Ordinary least-squares slope of log(residual) against log(n).
// Requires >= 3 points and strictly positive residuals.
double residual_decay_slope(std::span<const DecayPoint> points);

// Pairs (x_k, sigma_q * probs[k]): the step density whose pointwise limit
// is the continuous q-Gaussian.
std::vector<DensityPoint> scaled_density(const QBinomialPmf& pmf);

// Fits A exp_q(-beta x^2) on |x| <= window: A is the density value nearest
// x = 0, beta the through-origin least-squares slope of q_ln(g/A) against
// -x^2. Requires >= 10 points with g > 0 in the window.
QGaussianFit fit_q_gaussian(std::span<const DensityPoint> density,
                            const DeformationParameter& param, double window);

}  // namespace qdeform

#endif
