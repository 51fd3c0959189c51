#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "qdeform/divergence.hpp"
#include "qdeform/qbinomial.hpp"

using namespace qdeform;

namespace {

ProbVector random_prob(std::mt19937& rng, std::size_t len) {
  std::uniform_real_distribution<double> d(0.05, 1.0);
  std::vector<double> v(len);
  double sum = 0.0;
  for (auto& x : v) {
    x = d(rng);
    sum += x;
  }
  for (auto& x : v) x /= sum;
  // renormalize exactly enough for the 1e-12 constructor gate
  double s2 = 0.0;
  for (double x : v) s2 += x;
  v[0] += 1.0 - s2;
  return ProbVector(v);
}

double kl(const ProbVector& p, const ProbVector& r) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) s += p[i] * std::log(p[i] / r[i]);
  }
  return s;
}

}  // namespace

TEST_CASE("prob vector validation") {
  CHECK_THROWS_AS(ProbVector({0.5, 0.6}), Error);
  CHECK_THROWS_AS(ProbVector({-0.1, 1.1}), Error);
  CHECK_THROWS_AS(ProbVector({}), Error);
  CHECK_NOTHROW(ProbVector({0.25, 0.75}));
  CHECK_NOTHROW(ProbVector({1.0}));
}

TEST_CASE("q_divergence examples") {
  const ProbVector p({0.3, 0.7});
  const ProbVector r({0.5, 0.5});
  // identical arguments give exactly zero
  for (double q : {0.3, 0.5, 1.0, 1.5}) {
    CHECK(q_divergence(DeformationParameter(q), p, p) == 0.0);
  }
  // (1 - (0.3^1.5 + 0.7^1.5)/sqrt(0.5))/(-0.5), hand evaluation
  CHECK(q_divergence(DeformationParameter(1.5), p, r) ==
        doctest::Approx(0.12126034081278252).epsilon(1e-13));
  CHECK(q_divergence(DeformationParameter(1.0), p, r) ==
        doctest::Approx(0.08228287850505185).epsilon(1e-13));
  // support error: p_i > 0 where r_i = 0
  CHECK_THROWS_AS(q_divergence(DeformationParameter(0.5), ProbVector({0.5, 0.5}),
                               ProbVector({1.0, 0.0})),
                  Error);
  // nested support is fine
  CHECK(q_divergence(DeformationParameter(0.5), ProbVector({1.0, 0.0}),
                     ProbVector({0.5, 0.5})) > 0.0);
  CHECK_THROWS_AS(q_divergence(DeformationParameter(0.5), ProbVector({1.0}),
                               ProbVector({0.5, 0.5})),
                  Error);
}

TEST_CASE("alpha_divergence branches") {
  const ProbVector p({0.3, 0.7});
  const ProbVector r({0.5, 0.5});
  CHECK(alpha_divergence(-1.0, p, r) == doctest::Approx(kl(p, r)).epsilon(1e-13));
  CHECK(alpha_divergence(1.0, p, r) == doctest::Approx(kl(r, p)).epsilon(1e-13));
  // 4 (1 - (sqrt(0.15) + sqrt(0.35)))
  CHECK(alpha_divergence(0.0, p, r) ==
        doctest::Approx(0.08437474827718693).epsilon(1e-13));
  // branch threshold 1e-8
  CHECK(alpha_divergence(-1.0 + 1e-9, p, r) == alpha_divergence(-1.0, p, r));
  CHECK(alpha_divergence(1.0 - 1e-9, p, r) == alpha_divergence(1.0, p, r));
  // generic branch joins the KL branch continuously
  CHECK(alpha_divergence(-1.0 + 1e-7, p, r) ==
        doctest::Approx(kl(p, r)).epsilon(1e-6));
}

TEST_CASE("alpha <-> q maps") {
  CHECK(q_from_alpha(0.0) == 0.5);
  CHECK(alpha_from_q(1.0) == -1.0);
  CHECK(alpha_from_q(q_from_alpha(0.37)) == 0.37);
  CHECK(q_from_alpha(alpha_from_q(1.25)) == 1.25);
  CHECK_THROWS_AS(q_from_alpha(5.0, true), Error);
  CHECK_THROWS_AS(alpha_from_q(-0.5, true), Error);
  CHECK_NOTHROW(q_from_alpha(5.0, false));
}

TEST_CASE("rate function") {
  const DeformationParameter p05(0.5);
  CHECK(rate_function(p05, 0.5, 0.5) == 0.0);
  // q-divergence example value divided by 2-q
  CHECK(rate_function(p05, 0.3, 0.5) ==
        doctest::Approx(0.12126034081278252 / 1.5).epsilon(1e-13));
  // symmetric in x about r = 1/2
  for (double x : {0.1, 0.25, 0.4}) {
    CHECK(rate_function(p05, x, 0.5) ==
          doctest::Approx(rate_function(p05, 1.0 - x, 0.5)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(rate_function(p05, 0.0, 0.5), Error);
  CHECK_THROWS_AS(rate_function(p05, 0.5, 1.0), Error);
}

TEST_CASE("corollary index map") {
  const CorollaryIndexMap classical = corollary_index_map(-1.0);
  CHECK(classical.scaling_exponent == 1.0);
  CHECK(classical.divergence_index == -1.0);
  const CorollaryIndexMap hellinger = corollary_index_map(0.0);
  CHECK(hellinger.scaling_exponent == 1.5);
  CHECK(hellinger.divergence_index == -2.0);
  for (double alpha : {-2.5, -1.7, -0.3, 0.4, 0.9}) {
    const CorollaryIndexMap m = corollary_index_map(alpha);
    CHECK(m.scaling_exponent + q_from_alpha(alpha) ==
          doctest::Approx(2.0).epsilon(1e-15));
  }
  CHECK_THROWS_AS(corollary_index_map(-3.5), Error);
  CHECK_THROWS_AS(corollary_index_map(1.5), Error);
}

TEST_CASE("alpha-q relation D^(alpha) = D_q / q over 200 random pairs") {
  std::mt19937 rng(101);
  std::uniform_int_distribution<std::size_t> len(2, 5);
  const double qs[] = {0.25, 0.5, 0.75, 1.25, 1.5};
  int count = 0;
  while (count < 200) {
    const std::size_t l = len(rng);
    const ProbVector p = random_prob(rng, l);
    const ProbVector r = random_prob(rng, l);
    for (double q : qs) {
      const double via_alpha = alpha_divergence(1.0 - 2.0 * q, p, r);
      const double via_q = q_divergence(DeformationParameter(q), p, r) / q;
      CHECK(std::fabs(via_alpha - via_q) <= 1e-12 * (1.0 + std::fabs(via_q)));
    }
    ++count;
  }
}

TEST_CASE("nonnegativity and identity of indiscernibles") {
  std::mt19937 rng(103);
  std::uniform_int_distribution<std::size_t> len(2, 5);
  std::uniform_real_distribution<double> eps(1e-6, 0.05);
  for (int i = 0; i < 300; ++i) {
    const std::size_t l = len(rng);
    const ProbVector p = random_prob(rng, l);
    const ProbVector r = random_prob(rng, l);
    for (double q : {0.25, 0.75, 1.0, 1.5, 1.9}) {
      CHECK(q_divergence(DeformationParameter(q), p, r) >= 0.0);
      CHECK(q_divergence(DeformationParameter(q), p, p) == 0.0);
    }
    // perturbation family: strictly positive divergence away from equality
    std::vector<double> v(p.values().begin(), p.values().end());
    const double e = std::min(eps(rng), std::min(v[0], v[1]) / 2.0);
    v[0] += e;
    v[1] -= e;
    const ProbVector pp(v);
    CHECK(q_divergence(DeformationParameter(0.75), pp, p) > 0.0);
  }
}

TEST_CASE("KL consistency near q = 1") {
  std::mt19937 rng(107);
  for (int i = 0; i < 100; ++i) {
    const ProbVector p = random_prob(rng, 3);
    const ProbVector r = random_prob(rng, 3);
    const double ref = kl(p, r);
    for (double q : {1.0 - 1e-9, 1.0 + 1e-9}) {
      CHECK(std::fabs(q_divergence(DeformationParameter(q), p, r) - ref) < 1e-8);
    }
  }
}

TEST_CASE("q-log weight asymptotics track the dual-index divergence") {
  // -(2-q)/n^{2-q} (S_k - S_max) approaches D_{2-q}((k/n,.)||(r,.)); the gap
  // is O(ln_q n / n^{2-q}) by the coefficient expansion, and the measured
  // decay is at least that order (observed ~ 1/n for both regimes).
  for (double q : {0.5, 1.5}) {
    const DeformationParameter param(q);
    std::vector<double> lx, ly;
    double prev_gap = 1e300;
    bool decreasing = true;
    for (std::uint64_t n : {1000, 10000, 100000}) {
      const QFactorialTable t(param, n);
      const QBinomialSpec spec(param, n, 0.5);
      const std::vector<double> s = qlog_weights(spec, t);
      const std::uint64_t k = (3 * n) / 10;
      double smax = s[0];
      for (double v : s) smax = std::max(smax, v);
      const double pk = static_cast<double>(k) / static_cast<double>(n);
      const double target = q_divergence(param.dual(), ProbVector({pk, 1.0 - pk}),
                                         ProbVector({0.5, 0.5}));
      const double scale = detail::pow_eln(static_cast<double>(n), 2.0 - q);
      const double gap = std::fabs(-(2.0 - q) / scale * (s[k] - smax) - target);
      if (gap >= prev_gap) decreasing = false;
      prev_gap = gap;
      lx.push_back(std::log(static_cast<double>(n)));
      ly.push_back(std::log(gap));
    }
    CHECK(decreasing);
    double xm = 0, ym = 0, sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      xm += lx[i] / 3;
      ym += ly[i] / 3;
    }
    for (std::size_t i = 0; i < 3; ++i) {
      sxy += (lx[i] - xm) * (ly[i] - ym);
      sxx += (lx[i] - xm) * (lx[i] - xm);
    }
    const double slope = sxy / sxx;
    const double bound = q > 1.0 ? -(2.0 - q) : -1.0;
    CHECK(slope <= bound + 0.3);
  }
}
