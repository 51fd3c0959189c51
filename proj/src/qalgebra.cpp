#include "qdeform/qalgebra.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace qdeform {

DeformationParameter::DeformationParameter(double q, double classical_eps)
    : q_(q), eps_(classical_eps) {
  if (!std::isfinite(q) || q <= 0.0 || q >= 2.0) {
    throw Error(ErrorKind::Domain,
                "deformation parameter q must lie in the open interval (0, 2), got " +
                    std::to_string(q));
  }
  if (!std::isfinite(classical_eps) || classical_eps <= 0.0 || classical_eps >= 0.5) {
    throw Error(ErrorKind::Domain, "classical_eps must lie in (0, 0.5)");
  }
  if (std::fabs(q - 1.0) < eps_) {
    regime_ = Regime::ClassicalLimit;
  } else if (q <= 1.0 - eps_) {
    regime_ = Regime::CompactSupport;
  } else {
    regime_ = Regime::HeavyTail;
  }
}

namespace detail {

double pow_eln(double base, double expo) {
  if (base == 0.0) {
    if (expo > 0.0) return 0.0;
    if (expo == 0.0) return 1.0;
    return std::numeric_limits<double>::infinity();
  }
  if (expo == 0.0) return 1.0;
  return std::exp(expo * std::log(base));
}

long double pow_eln_ld(long double base, long double expo) {
  if (base == 0.0L) {
    if (expo > 0.0L) return 0.0L;
    if (expo == 0.0L) return 1.0L;
    return std::numeric_limits<long double>::infinity();
  }
  if (expo == 0.0L) return 1.0L;
  return std::exp(expo * std::log(base));
}

double pow_eln_m1(double base, double expo) {
  return std::expm1(expo * std::log(base));
}

double q_ln_raw(double q, double x) {
  const double omq = 1.0 - q;
  if (omq == 0.0) return std::log(x);
  return std::expm1(omq * std::log(x)) / omq;
}

long double q_ln_raw_ld(double q, long double x) {
  const long double omq = 1.0L - static_cast<long double>(q);
  if (omq == 0.0L) return std::log(x);
  return std::expm1(omq * std::log(x)) / omq;
}

double q_exp_raw(double q, double x) {
  const double omq = 1.0 - q;
  if (omq == 0.0) return std::exp(x);
  const double v = omq * x;
  if (v <= -1.0) {
    if (q < 1.0) return 0.0;
    throw Error(ErrorKind::Domain,
                "q_exp diverges at 1 + (1-q)x <= 0 for q > 1 (q=" + std::to_string(q) +
                    ", x=" + std::to_string(x) + ")");
  }
  return std::exp(std::log1p(v) / omq);
}

}  // namespace detail

double q_ln(const DeformationParameter& param, double x) {
  if (!(x > 0.0)) {
    throw Error(ErrorKind::Domain, "q_ln requires x > 0, got " + std::to_string(x));
  }
  return detail::q_ln_raw(param.q(), x);
}

double q_exp(const DeformationParameter& param, double x) {
  return detail::q_exp_raw(param.q(), x);
}

double q_product(const DeformationParameter& param, double x, double y) {
  if (!(x > 0.0) || !(y > 0.0)) {
    throw Error(ErrorKind::Domain, "q_product requires positive factors");
  }
  const double q = param.q();
  const double omq = 1.0 - q;
  if (omq == 0.0) return x * y;
  // x^{1-q} + y^{1-q} - 1 assembled as (x^{1-q}-1) + (y^{1-q}-1) + 1: the
  // summand is then exactly (1-q)(ln_q x + ln_q y), which keeps the
  // homomorphism identity tight near the domain boundary.
  const double sm1 = detail::pow_eln_m1(x, omq) + detail::pow_eln_m1(y, omq);
  if (!(sm1 > -1.0)) {
    throw Error(ErrorKind::Domain, "q_product outside domain: x^(1-q) + y^(1-q) - 1 <= 0");
  }
  return std::exp(std::log1p(sm1) / omq);
}

}  // namespace qdeform
