#include "qdeform/qcombinatorics.hpp"

#include <cmath>
#include <string>

namespace qdeform {

namespace {

[[noreturn]] void range_fail(const std::string& what) { throw Error(ErrorKind::Range, what); }

long double refined_form_ld(double q, long double n, long double c_q) {
  const long double qq = 2.0L - static_cast<long double>(q);
  return (n / qq + 0.5L) * detail::q_ln_raw_ld(q, n) - n / qq + c_q;
}

}  // namespace

QFactorialTable::QFactorialTable(DeformationParameter param, std::size_t max_n)
    : param_(param), prefix_(max_n + 1) {
  prefix_[0] = 0.0L;  // empty product: 0!_q = 1
  long double sum = 0.0L, comp = 0.0L;
  const double q = param_.q();
  for (std::size_t k = 1; k <= max_n; ++k) {
    const long double term = detail::q_ln_raw_ld(q, static_cast<long double>(k));
    const long double y = term - comp;
    const long double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    prefix_[k] = sum;
  }
}

double QFactorialTable::q_ln_factorial(std::size_t n) const {
  return static_cast<double>(q_ln_factorial_ld(n));
}

long double QFactorialTable::q_ln_factorial_ld(std::size_t n) const {
  if (n >= prefix_.size()) {
    range_fail("q_ln_factorial: n=" + std::to_string(n) + " exceeds table max_n=" +
               std::to_string(max_n()));
  }
  return prefix_[n];
}

double QFactorialTable::q_ln_binomial_coeff(std::size_t n, std::size_t k) const {
  if (n >= prefix_.size() || k > n) {
    range_fail("q_ln_binomial_coeff: require 0 <= k <= n <= max_n");
  }
  return static_cast<double>(prefix_[n] - (prefix_[k] + prefix_[n - k]));
}

double QFactorialTable::q_ln_multinomial_coeff(std::size_t n,
                                               std::span<const std::uint64_t> parts) const {
  if (n >= prefix_.size()) {
    range_fail("q_ln_multinomial_coeff: n exceeds table");
  }
  std::uint64_t total = 0;
  long double sum = 0.0L;
  for (std::uint64_t p : parts) {
    if (p > n) range_fail("q_ln_multinomial_coeff: part exceeds n");
    total += p;
    sum += prefix_[static_cast<std::size_t>(p)];
  }
  if (total != n) {
    throw Error(ErrorKind::Constraint, "q_ln_multinomial_coeff: parts must sum to n");
  }
  return static_cast<double>(prefix_[n] - sum);
}

double stirling_leading(const DeformationParameter& param, std::uint64_t n) {
  if (n < 1) throw Error(ErrorKind::Domain, "stirling_leading requires n >= 1");
  const double qq = 2.0 - param.q();
  const double nd = static_cast<double>(n);
  return (nd / qq) * detail::q_ln_raw(param.q(), nd) - nd / qq;
}

double stirling_refined(const DeformationParameter& param, std::uint64_t n,
                        const StirlingConstant& c) {
  if (n < 1) throw Error(ErrorKind::Domain, "stirling_refined requires n >= 1");
  const double qq = 2.0 - param.q();
  const double nd = static_cast<double>(n);
  return (nd / qq + 0.5) * detail::q_ln_raw(param.q(), nd) - nd / qq + c.c_q;
}

double stirling_refined_defect(const QFactorialTable& table, std::size_t n,
                               const StirlingConstant& c) {
  const long double exact = table.q_ln_factorial_ld(n);
  if (n < 1) throw Error(ErrorKind::Domain, "stirling_refined_defect requires n >= 1");
  return static_cast<double>(
      exact - refined_form_ld(table.param().q(), static_cast<long double>(n),
                              static_cast<long double>(c.c_q)));
}

StirlingConstant estimate_c_q(const QFactorialTable& table, std::size_t n_ref) {
  if (n_ref < 1000) {
    range_fail("estimate_c_q requires n_ref >= 1000");
  }
  if (2 * n_ref > table.max_n()) {
    range_fail("estimate_c_q requires 2*n_ref <= max_n (table too small)");
  }
  const double q = table.param().q();
  const auto defect = [&](std::size_t m) {
    return table.q_ln_factorial_ld(m) -
           refined_form_ld(q, static_cast<long double>(m), 0.0L);
  };
  const long double d1 = defect(n_ref);
  const long double d2 = defect(2 * n_ref);
  const long double w = detail::pow_eln_ld(2.0L, -static_cast<long double>(q));
  const long double c = (d2 - w * d1) / (1.0L - w);
  const long double bound = std::fabs(d2 - d1) / (1.0L - w);
  return StirlingConstant{q, static_cast<double>(c), n_ref, static_cast<double>(bound)};
}

double tsallis_entropy(double entropic_index, std::span<const double> p) {
  const double om = entropic_index - 1.0;
  if (om == 0.0) {
    double s = 0.0;
    for (double pi : p) {
      if (pi > 0.0) s -= pi * std::log(pi);
    }
    return s;
  }
  // sum p_i^idx - 1 = sum p_i (p_i^{idx-1} - 1), term-wise expm1
  double s = 0.0;
  for (double pi : p) {
    if (pi > 0.0) s += pi * std::expm1(om * std::log(pi));
  }
  return -s / om;
}

double tsallis_entropy(const DeformationParameter& param, const ProbVector& p) {
  return tsallis_entropy(param.q(), p.values());
}

double binomial_entropy_residual(const QFactorialTable& table,
                                 const DeformationParameter& param,
                                 std::size_t n, std::size_t k) {
  if (k < 1 || k > n - 1 || n > table.max_n()) {
    range_fail("binomial_entropy_residual: require 1 <= k <= n-1 <= max_n-1");
  }
  if (table.max_n() < 2000) {
    range_fail("binomial_entropy_residual: table must cover max_n >= 2000 for the "
               "internal c_q estimate");
  }
  const StirlingConstant sc = estimate_c_q(table, table.max_n() / 2);
  const double q = param.q();
  const long double nl = static_cast<long double>(n);
  const long double kl = static_cast<long double>(k);
  const long double qq = 2.0L - static_cast<long double>(q);
  const double pk = static_cast<double>(k) / static_cast<double>(n);
  const double probs[2] = {pk, 1.0 - pk};
  const long double exact = table.q_ln_factorial_ld(n) -
                            (table.q_ln_factorial_ld(k) + table.q_ln_factorial_ld(n - k));
  const long double half_term = 0.5L * (detail::q_ln_raw_ld(q, nl) -
                                        detail::q_ln_raw_ld(q, kl) -
                                        detail::q_ln_raw_ld(q, nl - kl));
  const long double entropy_term =
      detail::pow_eln_ld(nl, qq) / qq *
      static_cast<long double>(tsallis_entropy(2.0 - q, probs));
  const long double approx = -static_cast<long double>(sc.c_q) + half_term + entropy_term;
  return static_cast<double>(exact - approx);
}

}  // namespace qdeform
