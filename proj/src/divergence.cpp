#include "qdeform/divergence.hpp"

#include <cmath>
#include <string>

namespace qdeform {

namespace {

void check_same_length(const ProbVector& p, const ProbVector& r) {
  if (p.size() != r.size()) {
    throw Error(ErrorKind::Constraint, "divergence arguments must have equal length");
  }
}

[[noreturn]] void support_fail(const char* what) { throw Error(ErrorKind::Support, what); }

}  // namespace

double q_divergence(const DeformationParameter& param, const ProbVector& p,
                    const ProbVector& r) {
  check_same_length(p, r);
  const double q = param.q();
  const double omq = 1.0 - q;
  if (omq == 0.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] == 0.0) continue;
      if (r[i] == 0.0) support_fail("q_divergence: p_i > 0 where r_i = 0");
      s += p[i] * std::log(p[i] / r[i]);
    }
    return s;
  }
  // 1 - sum p^q r^{1-q} = -sum p_i ((r_i/p_i)^{1-q} - 1), term-wise expm1.
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (r[i] == 0.0) support_fail("q_divergence: p_i > 0 where r_i = 0");
    s += p[i] * std::expm1(omq * std::log(r[i] / p[i]));
  }
  return -s / omq;
}

double alpha_divergence(double alpha, const ProbVector& p, const ProbVector& r) {
  check_same_length(p, r);
  if (std::fabs(alpha - 1.0) < 1e-8) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (r[i] == 0.0) continue;
      if (p[i] == 0.0) support_fail("alpha_divergence(alpha=1): r_i > 0 where p_i = 0");
      s += r[i] * std::log(r[i] / p[i]);
    }
    return s;
  }
  if (std::fabs(alpha + 1.0) < 1e-8) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] == 0.0) continue;
      if (r[i] == 0.0) support_fail("alpha_divergence(alpha=-1): p_i > 0 where r_i = 0");
      s += p[i] * std::log(p[i] / r[i]);
    }
    return s;
  }
  // generic branch, exponents a = (1-alpha)/2 on p and 1-a on r
  const double a = (1.0 - alpha) / 2.0;
  double sm1 = 0.0;  // sum p^a r^{1-a} - 1
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) {
      if (a <= 0.0) support_fail("alpha_divergence: p_i = 0 with nonpositive exponent");
      continue;
    }
    if (r[i] == 0.0) support_fail("alpha_divergence: p_i > 0 where r_i = 0");
    sm1 += p[i] * std::expm1((1.0 - a) * std::log(r[i] / p[i]));
  }
  return -4.0 / (1.0 - alpha * alpha) * sm1;
}

double q_from_alpha(double alpha, bool validate) {
  const double q = (1.0 - alpha) / 2.0;
  if (validate && !(q > 0.0 && q < 2.0)) {
    throw Error(ErrorKind::Range, "q_from_alpha: image q=" + std::to_string(q) +
                                      " outside (0, 2)");
  }
  return q;
}

double alpha_from_q(double q, bool validate) {
  const double alpha = 1.0 - 2.0 * q;
  if (validate && !(alpha > -3.0 && alpha < 1.0)) {
    throw Error(ErrorKind::Range, "alpha_from_q: image alpha=" + std::to_string(alpha) +
                                      " outside (-3, 1)");
  }
  return alpha;
}

double rate_function(const DeformationParameter& param, double x, double r) {
  if (!(x > 0.0 && x < 1.0) || !(r > 0.0 && r < 1.0)) {
    throw Error(ErrorKind::Domain, "rate_function requires x, r in (0, 1)");
  }
  const ProbVector p({x, 1.0 - x});
  const ProbVector ref({r, 1.0 - r});
  return q_divergence(param.dual(), p, ref) / (2.0 - param.q());
}

CorollaryIndexMap corollary_index_map(double alpha) {
  const double q = (1.0 - alpha) / 2.0;
  if (!(q > 0.0 && q < 2.0)) {
    throw Error(ErrorKind::Range,
                "corollary_index_map: alpha=" + std::to_string(alpha) +
                    " maps outside the supported q interval (0, 2)");
  }
  return CorollaryIndexMap{(3.0 + alpha) / 2.0, -2.0 - alpha};
}

}  // namespace qdeform
