#include "qdeform/qdeform.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "qdeform/divergence.hpp"
#include "qdeform/limits.hpp"
#include "qdeform/qbinomial.hpp"
#include "qdeform/qcombinatorics.hpp"

using namespace qdeform;

struct qd_table {
  QFactorialTable impl;
};

struct qd_pmf {
  QBinomialPmf impl;
};

namespace {

thread_local std::string g_last_error;

qd_status to_status(ErrorKind k) {
  switch (k) {
    case ErrorKind::Domain: return QD_ERR_DOMAIN;
    case ErrorKind::Range: return QD_ERR_RANGE;
    case ErrorKind::Support: return QD_ERR_SUPPORT;
    case ErrorKind::Constraint: return QD_ERR_CONSTRAINT;
    case ErrorKind::Numeric: return QD_ERR_NUMERIC;
    case ErrorKind::Window: return QD_ERR_WINDOW;
    case ErrorKind::Fit: return QD_ERR_FIT;
  }
  return QD_ERR_INTERNAL;
}

template <typename Fn>
qd_status wrap(Fn&& fn) {
  try {
    fn();
    return QD_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "allocation failure";
    return QD_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QD_ERR_INTERNAL;
  }
}

qd_status invalid(const char* what) {
  g_last_error = what;
  return QD_ERR_INVALID;
}

qd_status copy_span(std::span<const double> src, double* out, size_t cap) {
  if (out == nullptr) return invalid("null output buffer");
  if (cap < src.size()) return invalid("output buffer too small");
  std::memcpy(out, src.data(), src.size() * sizeof(double));
  return QD_OK;
}

NormalizationMode to_mode(qd_norm_mode m) {
  return m == QD_NORM_EXACT_CQ ? NormalizationMode::ExactCq : NormalizationMode::MaxShift;
}

}  // namespace

extern "C" {

const char* qd_version(void) { return "qdeform 0.1.0"; }

const char* qd_last_error(void) { return g_last_error.c_str(); }

qd_status qd_q_ln(double q, double x, double* out) {
  if (!out) return invalid("null out");
  return wrap([&] { *out = q_ln(DeformationParameter(q), x); });
}

qd_status qd_q_exp(double q, double x, double* out) {
  if (!out) return invalid("null out");
  return wrap([&] { *out = q_exp(DeformationParameter(q), x); });
}

qd_status qd_q_product(double q, double x, double y, double* out) {
  if (!out) return invalid("null out");
  return wrap([&] { *out = q_product(DeformationParameter(q), x, y); });
}

qd_status qd_tsallis_entropy(double entropic_index, const double* p, size_t len,
                             double* out) {
  if (!out || (!p && len > 0)) return invalid("null argument");
  return wrap([&] { *out = tsallis_entropy(entropic_index, std::span(p, len)); });
}

qd_status qd_q_divergence(double q, const double* p, const double* r, size_t len,
                          double* out) {
  if (!out || !p || !r) return invalid("null argument");
  return wrap([&] {
    *out = q_divergence(DeformationParameter(q),
                        ProbVector(std::vector<double>(p, p + len)),
                        ProbVector(std::vector<double>(r, r + len)));
  });
}

qd_status qd_alpha_divergence(double alpha, const double* p, const double* r,
                              size_t len, double* out) {
  if (!out || !p || !r) return invalid("null argument");
  return wrap([&] {
    *out = alpha_divergence(alpha, ProbVector(std::vector<double>(p, p + len)),
                            ProbVector(std::vector<double>(r, r + len)));
  });
}

qd_status qd_q_from_alpha(double alpha, int validate, double* out) {
  if (!out) return invalid("null out");
  return wrap([&] { *out = q_from_alpha(alpha, validate != 0); });
}

qd_status qd_alpha_from_q(double q, int validate, double* out) {
  if (!out) return invalid("null out");
  return wrap([&] { *out = alpha_from_q(q, validate != 0); });
}

qd_status qd_rate_function(double q, double x, double r, double* out) {
  if (!out) return invalid("null out");
  return wrap([&] { *out = rate_function(DeformationParameter(q), x, r); });
}

qd_status qd_corollary_index_map(double alpha, double* scaling_exponent,
                                 double* divergence_index) {
  if (!scaling_exponent || !divergence_index) return invalid("null out");
  return wrap([&] {
    const CorollaryIndexMap m = corollary_index_map(alpha);
    *scaling_exponent = m.scaling_exponent;
    *divergence_index = m.divergence_index;
  });
}

qd_status qd_table_create(double q, uint64_t max_n, qd_table** out) {
  if (!out) return invalid("null out");
  return wrap([&] {
    *out = new qd_table{QFactorialTable(DeformationParameter(q),
                                        static_cast<std::size_t>(max_n))};
  });
}

void qd_table_free(qd_table* table) { delete table; }

qd_status qd_table_q_ln_factorial(const qd_table* table, uint64_t n, double* out) {
  if (!table || !out) return invalid("null argument");
  return wrap([&] { *out = table->impl.q_ln_factorial(static_cast<std::size_t>(n)); });
}

qd_status qd_table_q_ln_binomial(const qd_table* table, uint64_t n, uint64_t k,
                                 double* out) {
  if (!table || !out) return invalid("null argument");
  return wrap([&] {
    *out = table->impl.q_ln_binomial_coeff(static_cast<std::size_t>(n),
                                           static_cast<std::size_t>(k));
  });
}

qd_status qd_table_q_ln_multinomial(const qd_table* table, uint64_t n,
                                    const uint64_t* parts, size_t len, double* out) {
  if (!table || !out || (!parts && len > 0)) return invalid("null argument");
  return wrap([&] {
    *out = table->impl.q_ln_multinomial_coeff(static_cast<std::size_t>(n),
                                              std::span(parts, len));
  });
}

qd_status qd_stirling_leading(double q, uint64_t n, double* out) {
  if (!out) return invalid("null out");
  return wrap([&] { *out = stirling_leading(DeformationParameter(q), n); });
}

qd_status qd_stirling_refined(double q, uint64_t n, double c_q, double* out) {
  if (!out) return invalid("null out");
  return wrap([&] {
    const StirlingConstant c{q, c_q, 0, 0.0};
    *out = stirling_refined(DeformationParameter(q), n, c);
  });
}

qd_status qd_table_stirling_defect(const qd_table* table, uint64_t n, double c_q,
                                   double* out) {
  if (!table || !out) return invalid("null argument");
  return wrap([&] {
    const StirlingConstant c{table->impl.param().q(), c_q, 0, 0.0};
    *out = stirling_refined_defect(table->impl, static_cast<std::size_t>(n), c);
  });
}

qd_status qd_table_estimate_cq(const qd_table* table, uint64_t n_ref, double* c_q,
                               double* residual_bound) {
  if (!table || !c_q || !residual_bound) return invalid("null argument");
  return wrap([&] {
    const StirlingConstant c = estimate_c_q(table->impl, static_cast<std::size_t>(n_ref));
    *c_q = c.c_q;
    *residual_bound = c.residual_bound;
  });
}

qd_status qd_table_entropy_residual(const qd_table* table, uint64_t n, uint64_t k,
                                    double* out) {
  if (!table || !out) return invalid("null argument");
  return wrap([&] {
    *out = binomial_entropy_residual(table->impl, table->impl.param(),
                                     static_cast<std::size_t>(n),
                                     static_cast<std::size_t>(k));
  });
}

qd_status qd_pmf_build(const qd_table* table, uint64_t n, double r, qd_norm_mode mode,
                       qd_pmf** out) {
  if (!table || !out) return invalid("null argument");
  return wrap([&] {
    const QBinomialSpec spec(table->impl.param(), n, r, to_mode(mode));
    *out = new qd_pmf{build_pmf(spec, table->impl)};
  });
}

void qd_pmf_free(qd_pmf* pmf) { delete pmf; }

uint64_t qd_pmf_size(const qd_pmf* pmf) {
  return pmf ? static_cast<uint64_t>(pmf->impl.size()) : 0;
}

qd_status qd_pmf_probs(const qd_pmf* pmf, double* out, size_t cap) {
  if (!pmf) return invalid("null pmf");
  return copy_span(pmf->impl.probs(), out, cap);
}

qd_status qd_pmf_qlog_weights(const qd_pmf* pmf, double* out, size_t cap) {
  if (!pmf) return invalid("null pmf");
  return copy_span(pmf->impl.qlog_weights(), out, cap);
}

qd_status qd_pmf_grid(const qd_pmf* pmf, double* out, size_t cap) {
  if (!pmf) return invalid("null pmf");
  return copy_span(pmf->impl.grid(), out, cap);
}

qd_status qd_pmf_sigma(const qd_pmf* pmf, double* out) {
  if (!pmf || !out) return invalid("null argument");
  *out = pmf->impl.sigma_q();
  return QD_OK;
}

qd_status qd_pmf_peak_index(const qd_pmf* pmf, uint64_t* out) {
  if (!pmf || !out) return invalid("null argument");
  *out = static_cast<uint64_t>(pmf->impl.peak_index());
  return QD_OK;
}

qd_status qd_pmf_norm_meta(const qd_pmf* pmf, qd_norm_mode* mode, double* value) {
  if (!pmf || !mode || !value) return invalid("null argument");
  const NormalizationMeta m = pmf->impl.norm_meta();
  *mode = m.mode == NormalizationMode::ExactCq ? QD_NORM_EXACT_CQ : QD_NORM_MAX_SHIFT;
  *value = m.value;
  return QD_OK;
}

qd_status qd_pmf_peak_probability(const qd_pmf* pmf, double* out) {
  if (!pmf || !out) return invalid("null argument");
  return wrap([&] { *out = peak_probability(pmf->impl); });
}

qd_status qd_pmf_qlog_curvature(const qd_pmf* pmf, double* out) {
  if (!pmf || !out) return invalid("null argument");
  return wrap([&] { *out = qlog_curvature(pmf->impl); });
}

qd_status qd_pmf_cumulative_below(const qd_pmf* pmf, double x, double* out) {
  if (!pmf || !out) return invalid("null argument");
  return wrap([&] { *out = cumulative_below(pmf->impl, x); });
}

qd_status qd_ldp_statistic(double q, uint64_t n, double r, double x, double* out) {
  if (!out) return invalid("null out");
  return wrap([&] {
    const DeformationParameter param(q);
    const QFactorialTable table(param, static_cast<std::size_t>(n));
    const QBinomialSpec spec(param, n, r);
    *out = ldp_scaled_statistic(spec, table, x);
  });
}

qd_status qd_ldp_series(double q, double r, double x, const uint64_t* ns, size_t len,
                        double* stats, double* target) {
  if (!ns || !stats || !target) return invalid("null argument");
  return wrap([&] {
    const DeformationParameter param(q);
    const LdpSeries series =
        ldp_convergence_series(param, r, x, std::span(ns, len));
    for (size_t i = 0; i < series.entries.size(); ++i) {
      stats[i] = series.entries[i].scaled_stat;
    }
    *target = series.target;
  });
}

qd_status qd_clt_residual_count(double q, uint64_t n, double r, double window,
                                size_t* count) {
  if (!count) return invalid("null count");
  return wrap([&] {
    const DeformationParameter param(q);
    const QFactorialTable table(param, static_cast<std::size_t>(n));
    const QBinomialSpec spec(param, n, r);
    *count = clt_residuals(spec, table, window).residuals.size();
  });
}

qd_status qd_clt_residuals(double q, uint64_t n, double r, double window, uint64_t* ks,
                           double* xs, double* residuals, size_t cap, size_t* count,
                           double* max_abs_residual) {
  if (!count || !max_abs_residual) return invalid("null count/max output");
  return wrap([&] {
    const DeformationParameter param(q);
    const QFactorialTable table(param, static_cast<std::size_t>(n));
    const QBinomialSpec spec(param, n, r);
    const CltResidualReport report = clt_residuals(spec, table, window);
    *count = report.residuals.size();
    *max_abs_residual = report.max_abs_residual;
    if (ks == nullptr && xs == nullptr && residuals == nullptr) return;
    if (cap < report.residuals.size()) {
      throw Error(ErrorKind::Constraint, "clt residual buffer too small");
    }
    for (size_t i = 0; i < report.residuals.size(); ++i) {
      if (ks) ks[i] = report.residuals[i].k;
      if (xs) xs[i] = report.residuals[i].x;
      if (residuals) residuals[i] = report.residuals[i].residual;
    }
  });
}

qd_status qd_residual_decay_slope(const uint64_t* ns, const double* residuals,
                                  size_t len, double* out) {
  if (!ns || !residuals || !out) return invalid("null argument");
  return wrap([&] {
    std::vector<DecayPoint> pts(len);
    for (size_t i = 0; i < len; ++i) pts[i] = {ns[i], residuals[i]};
    *out = residual_decay_slope(pts);
  });
}

qd_status qd_fit_q_gaussian(double q, const double* xs, const double* gs, size_t len,
                            double window, double* beta, double* amplitude,
                            double* sup_error) {
  if (!xs || !gs || !beta || !amplitude || !sup_error) return invalid("null argument");
  return wrap([&] {
    std::vector<DensityPoint> density(len);
    for (size_t i = 0; i < len; ++i) density[i] = {xs[i], gs[i]};
    const QGaussianFit fit =
        fit_q_gaussian(density, DeformationParameter(q), window);
    *beta = fit.beta;
    *amplitude = fit.amplitude;
    *sup_error = fit.sup_error;
  });
}

}  // extern "C"
