/* qdeform C API: q-deformed algebra, combinatorics, the generalized
 * binomial distribution and its limit diagnostics, behind opaque handles.
 *
 * Every function returns a qd_status; outputs go through pointers that
 * are written only on QD_OK. qd_last_error() describes the most recent
 * failure on the calling thread.
 */
#ifndef QDEFORM_H
#define QDEFORM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QD_API __declspec(dllexport)
#else
#define QD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qd_status {
  QD_OK = 0,
  QD_ERR_DOMAIN = 1,     /* argument outside mathematical domain */
  QD_ERR_RANGE = 2,      /* index outside table/sequence bounds */
  QD_ERR_SUPPORT = 3,    /* divergence support mismatch */
  QD_ERR_CONSTRAINT = 4, /* structural constraint violated */
  QD_ERR_NUMERIC = 5,    /* numerical procedure failed */
  QD_ERR_WINDOW = 6,     /* too few points in window */
  QD_ERR_FIT = 7,        /* degenerate regression */
  QD_ERR_INVALID = 8,    /* null pointer / malformed call */
  QD_ERR_INTERNAL = 9
} qd_status;

typedef enum qd_norm_mode {
  QD_NORM_MAX_SHIFT = 0, /* shift by the maximum q-log weight, linear norm */
  QD_NORM_EXACT_CQ = 1   /* root-find t = ln_q C_q with sum exp_q(S_k + t) = 1 */
} qd_norm_mode;

typedef struct qd_table qd_table; /* immutable q-factorial prefix table */
typedef struct qd_pmf qd_pmf;     /* immutable generalized binomial pmf */

QD_API const char* qd_version(void);
QD_API const char* qd_last_error(void); /* thread-local, valid until next call */

/* ---- deformed elementary functions (0 < q < 2) ---- */
QD_API qd_status qd_q_ln(double q, double x, double* out);
QD_API qd_status qd_q_exp(double q, double x, double* out);
QD_API qd_status qd_q_product(double q, double x, double y, double* out);
QD_API qd_status qd_tsallis_entropy(double entropic_index, const double* p,
                                    size_t len, double* out);

/* ---- divergences ---- */
QD_API qd_status qd_q_divergence(double q, const double* p, const double* r,
                                 size_t len, double* out);
QD_API qd_status qd_alpha_divergence(double alpha, const double* p, const double* r,
                                     size_t len, double* out);
QD_API qd_status qd_q_from_alpha(double alpha, int validate, double* out);
QD_API qd_status qd_alpha_from_q(double q, int validate, double* out);
QD_API qd_status qd_rate_function(double q, double x, double r, double* out);
QD_API qd_status qd_corollary_index_map(double alpha, double* scaling_exponent,
                                        double* divergence_index);

/* ---- q-factorial table ---- */
QD_API qd_status qd_table_create(double q, uint64_t max_n, qd_table** out);
QD_API void qd_table_free(qd_table* table);
QD_API qd_status qd_table_q_ln_factorial(const qd_table* table, uint64_t n, double* out);
QD_API qd_status qd_table_q_ln_binomial(const qd_table* table, uint64_t n, uint64_t k,
                                        double* out);
QD_API qd_status qd_table_q_ln_multinomial(const qd_table* table, uint64_t n,
                                           const uint64_t* parts, size_t len,
                                           double* out);
QD_API qd_status qd_stirling_leading(double q, uint64_t n, double* out);
QD_API qd_status qd_stirling_refined(double q, uint64_t n, double c_q, double* out);
/* ln_q n!_q - refined(n), evaluated in extended precision: resolves the
 * O(n^-q) defect below ulp(ln_q n!_q). */
QD_API qd_status qd_table_stirling_defect(const qd_table* table, uint64_t n,
                                          double c_q, double* out);
QD_API qd_status qd_table_estimate_cq(const qd_table* table, uint64_t n_ref,
                                      double* c_q, double* residual_bound);
QD_API qd_status qd_table_entropy_residual(const qd_table* table, uint64_t n,
                                           uint64_t k, double* out);

/* ---- generalized binomial distribution ---- */
QD_API qd_status qd_pmf_build(const qd_table* table, uint64_t n, double r,
                              qd_norm_mode mode, qd_pmf** out);
QD_API void qd_pmf_free(qd_pmf* pmf);
QD_API uint64_t qd_pmf_size(const qd_pmf* pmf); /* n + 1; 0 on null */
QD_API qd_status qd_pmf_probs(const qd_pmf* pmf, double* out, size_t cap);
QD_API qd_status qd_pmf_qlog_weights(const qd_pmf* pmf, double* out, size_t cap);
QD_API qd_status qd_pmf_grid(const qd_pmf* pmf, double* out, size_t cap);
QD_API qd_status qd_pmf_sigma(const qd_pmf* pmf, double* out);
QD_API qd_status qd_pmf_peak_index(const qd_pmf* pmf, uint64_t* out);
QD_API qd_status qd_pmf_norm_meta(const qd_pmf* pmf, qd_norm_mode* mode, double* value);
QD_API qd_status qd_pmf_peak_probability(const qd_pmf* pmf, double* out);
QD_API qd_status qd_pmf_qlog_curvature(const qd_pmf* pmf, double* out);
QD_API qd_status qd_pmf_cumulative_below(const qd_pmf* pmf, double x, double* out);

/* ---- limit experiments ---- */
QD_API qd_status qd_ldp_statistic(double q, uint64_t n, double r, double x, double* out);
/* stats must hold len values; target receives -rate(x). */
QD_API qd_status qd_ldp_series(double q, double r, double x, const uint64_t* ns,
                               size_t len, double* stats, double* target);
QD_API qd_status qd_clt_residual_count(double q, uint64_t n, double r, double window,
                                       size_t* count);
/* Fills up to cap entries; *count receives the total. Arrays may be null
 * to query the count only; QD_ERR_INVALID if cap is too small. */
QD_API qd_status qd_clt_residuals(double q, uint64_t n, double r, double window,
                                  uint64_t* ks, double* xs, double* residuals,
                                  size_t cap, size_t* count, double* max_abs_residual);
QD_API qd_status qd_residual_decay_slope(const uint64_t* ns, const double* residuals,
                                         size_t len, double* out);
QD_API qd_status qd_fit_q_gaussian(double q, const double* xs, const double* gs,
                                   size_t len, double window, double* beta,
                                   double* amplitude, double* sup_error);

#ifdef __cplusplus
}
#endif

#endif
