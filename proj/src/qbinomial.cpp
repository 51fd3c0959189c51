#include "qdeform/qbinomial.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace qdeform {

namespace {

double kahan_sum(std::span<const double> v) {
  double sum = 0.0, comp = 0.0;
  for (double x : v) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

// S_k in long double; Lr/L1r are ln_{2-q}(r), ln_{2-q}(1-r).
long double weight_ld(const QFactorialTable& table, std::uint64_t n, std::uint64_t k,
                      double q, long double lr, long double l1r) {
  const long double qq = 2.0L - static_cast<long double>(q);
  const long double binom =
      table.q_ln_factorial_ld(n) -
      (table.q_ln_factorial_ld(k) + table.q_ln_factorial_ld(n - k));
  const long double pk =
      k == 0 ? 0.0L : detail::pow_eln_ld(static_cast<long double>(k), qq);
  const long double pnk =
      k == n ? 0.0L : detail::pow_eln_ld(static_cast<long double>(n - k), qq);
  return binom + (pk * lr + pnk * l1r) / qq;
}

}  // namespace

QBinomialSpec::QBinomialSpec(DeformationParameter param_, std::uint64_t n_, double r_,
                             NormalizationMode mode_)
    : param(param_), n(n_), r(r_), mode(mode_) {
  if (n < 2) throw Error(ErrorKind::Constraint, "QBinomialSpec requires n >= 2");
  if (!(r > 0.0) || !(r < 1.0)) {
    throw Error(ErrorKind::Domain, "QBinomialSpec requires 0 < r < 1, got r=" +
                                       std::to_string(r));
  }
}

double qlog_weight(const QBinomialSpec& spec, const QFactorialTable& table,
                   std::uint64_t k) {
  if (k > spec.n || spec.n > table.max_n()) {
    throw Error(ErrorKind::Range, "qlog_weight: require k <= n <= max_n");
  }
  const double q = spec.param.q();
  const long double lr = detail::q_ln_raw_ld(2.0 - q, static_cast<long double>(spec.r));
  const long double l1r =
      detail::q_ln_raw_ld(2.0 - q, static_cast<long double>(1.0 - spec.r));
  return static_cast<double>(weight_ld(table, spec.n, k, q, lr, l1r));
}

std::vector<double> qlog_weights(const QBinomialSpec& spec, const QFactorialTable& table) {
  if (spec.n > table.max_n()) {
    throw Error(ErrorKind::Range, "qlog_weights: n exceeds table max_n");
  }
  const double q = spec.param.q();
  const long double lr = detail::q_ln_raw_ld(2.0 - q, static_cast<long double>(spec.r));
  const long double l1r =
      detail::q_ln_raw_ld(2.0 - q, static_cast<long double>(1.0 - spec.r));
  std::vector<double> s(spec.n + 1);
  for (std::uint64_t k = 0; k <= spec.n; ++k) {
    s[k] = static_cast<double>(weight_ld(table, spec.n, k, q, lr, l1r));
  }
  return s;
}

QBinomialPmf::QBinomialPmf(QBinomialSpec spec, std::vector<double> qlog_weights,
                           std::vector<double> probs, NormalizationMeta meta,
                           std::size_t peak_index, double sigma_q,
                           std::vector<double> grid)
    : spec_(std::move(spec)),
      qlog_weights_(std::move(qlog_weights)),
      probs_(std::move(probs)),
      meta_(meta),
      peak_index_(peak_index),
      sigma_q_(sigma_q),
      grid_(std::move(grid)) {}

QBinomialPmf build_pmf(const QBinomialSpec& spec, const QFactorialTable& table) {
  const double q = spec.param.q();
  const std::uint64_t n = spec.n;
  std::vector<double> s = qlog_weights(spec, table);
  const double s_max = *std::max_element(s.begin(), s.end());

  std::vector<double> w(s.size());
  NormalizationMeta meta{spec.mode, 0.0};

  if (spec.mode == NormalizationMode::MaxShift) {
    for (std::size_t k = 0; k < s.size(); ++k) {
      w[k] = detail::q_exp_raw(q, s[k] - s_max);
    }
    meta.value = s_max;
  } else {
    // f(t) = sum_k exp_q(S_k + t) - 1 is continuous and nondecreasing in t,
    // strictly increasing wherever positive terms exist, so a sign-bracketed
    // bisection pins the unique root. For q < 2, S_k + t <= S_max + t <= 1
    // keeps every term inside the exp_q domain at the upper endpoint, where
    // the peak term exp_q(1) = (2-q)^{1/(1-q)} > 1 guarantees f > 0.
    const auto f = [&](double t) {
      double sum = 0.0, comp = 0.0;
      for (double sk : s) {
        const double y = detail::q_exp_raw(q, sk + t) - comp;
        const double u = sum + y;
        comp = (u - sum) - y;
        sum = u;
      }
      return sum - 1.0;
    };
    double hi = -s_max + 1.0;
    double lo = -std::fabs(s_max) - 1.0;
    if (lo >= hi) lo = hi - 1.0;
    double step = 1.0;
    int expansions = 0;
    while (f(lo) > 0.0) {
      if (++expansions > 200) {
        throw Error(ErrorKind::Numeric,
                    "ExactCq bracket not established within 200 expansions; last bracket [" +
                        std::to_string(lo) + ", " + std::to_string(hi) + "]");
      }
      lo -= step;
      step *= 2.0;
    }
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
      mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      (f(mid) < 0.0 ? lo : hi) = mid;
      if (hi - lo <= 1e-13 * (1.0 + std::fabs(mid))) break;
    }
    const double t = 0.5 * (lo + hi);
    for (std::size_t k = 0; k < s.size(); ++k) {
      w[k] = detail::q_exp_raw(q, s[k] + t);
    }
    meta.value = t;
  }

  const double total = kahan_sum(w);
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw Error(ErrorKind::Numeric, "pmf normalization failed: weight sum not positive");
  }
  std::vector<double> probs(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) probs[k] = w[k] / total;

  std::size_t peak = 0;
  for (std::size_t k = 1; k < probs.size(); ++k) {
    if (probs[k] > probs[peak]) peak = k;  // ties keep the smaller index
  }

  const double sigma = detail::pow_eln(static_cast<double>(n), q / 2.0) *
                       std::sqrt(spec.r * (1.0 - spec.r));
  std::vector<double> grid(probs.size());
  const double mean = static_cast<double>(n) * spec.r;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    grid[k] = (static_cast<double>(k) - mean) / sigma;
  }

  return QBinomialPmf(spec, std::move(s), std::move(probs), meta, peak, sigma,
                      std::move(grid));
}

double peak_probability(const QBinomialPmf& pmf) {
  const auto idx = static_cast<std::size_t>(
      std::floor(static_cast<double>(pmf.spec().n) * pmf.spec().r));
  return pmf.probs()[std::min(idx, pmf.size() - 1)];
}

double qlog_curvature(const QBinomialPmf& pmf) {
  const std::uint64_t n = pmf.spec().n;
  if (n < 10) throw Error(ErrorKind::Domain, "qlog_curvature requires n >= 10");
  const auto c = static_cast<std::size_t>(
      std::floor(static_cast<double>(n) * pmf.spec().r));
  if (c == 0 || c >= pmf.size() - 1) {
    throw Error(ErrorKind::Domain, "qlog_curvature: peak index floor(n r) at boundary");
  }
  const auto s = pmf.qlog_weights();
  return (s[c + 1] - s[c]) - (s[c] - s[c - 1]);
}

double cumulative_below(const QBinomialPmf& pmf, double x) {
  if (!(x > 0.0) || !(x < 1.0)) {
    throw Error(ErrorKind::Domain, "cumulative_below requires 0 < x < 1");
  }
  const auto m = static_cast<std::size_t>(
      std::floor(static_cast<double>(pmf.spec().n) * x));
  const auto probs = pmf.probs();
  return kahan_sum(probs.subspan(0, std::min(m + 1, probs.size())));
}

}  // namespace qdeform
