/*
 * tailpca — estimation of the number of significant principal components in
 * the extremal dependence structure of heavy-tailed multivariate data.
 *
 * C API of the shared library. All functions that can fail return a
 * tailpca_status; a human-readable message for the last failure on the
 * calling thread is available from tailpca_last_error(). Objects are opaque
 * handles released with their matching *_free function.
 */
#ifndef TAILPCA_H
#define TAILPCA_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TAILPCA_API __declspec(dllexport)
#else
#define TAILPCA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tailpca_status {
    TAILPCA_OK = 0,
    TAILPCA_ERR_ARGUMENT = 1, /* API misuse: null handle, out-of-range value */
    TAILPCA_ERR_INPUT = 2,    /* unreadable or malformed input data */
    TAILPCA_ERR_NUMERIC = 3,  /* regime/numeric violation */
    TAILPCA_ERR_INTERNAL = 4,
} tailpca_status;

typedef enum tailpca_criterion {
    TAILPCA_AIC = 0,      /* fixed-dimension AIC, needs k > d */
    TAILPCA_BIC = 1,      /* fixed-dimension BIC, needs k > d */
    TAILPCA_AIC_CIRC = 2, /* rescaled high-dimension AIC, needs k > d */
    TAILPCA_BIC_CIRC = 3, /* rescaled high-dimension BIC, needs k > d */
    TAILPCA_AIC_STAR = 4, /* high-dimension AIC, needs d > k */
    TAILPCA_BIC_STAR = 5, /* high-dimension BIC, needs d > k */
} tailpca_criterion;

typedef struct tailpca_matrix tailpca_matrix;
typedef struct tailpca_spectrum tailpca_spectrum;
typedef struct tailpca_curve tailpca_curve;
typedef struct tailpca_experiment tailpca_experiment;

TAILPCA_API const char* tailpca_version(void);

/* Message of the most recent failing call on this thread; never NULL. */
TAILPCA_API const char* tailpca_last_error(void);

/* Stable label of a criterion: "aic", "bic", "aic-circ", ... */
TAILPCA_API const char* tailpca_criterion_name(tailpca_criterion kind);

/* ------------------------------------------------------------------ data */

/* Copies a rows x cols row-major array; entries must be finite, cols >= 2. */
TAILPCA_API tailpca_status tailpca_matrix_create(int64_t rows, int64_t cols,
                                                 const double* row_major,
                                                 tailpca_matrix** out);

/* Reads a CSV file (optional header row, configurable delimiter). */
TAILPCA_API tailpca_status tailpca_matrix_read_csv(const char* path, char delimiter,
                                                   tailpca_matrix** out);

TAILPCA_API int64_t tailpca_matrix_rows(const tailpca_matrix* m);
TAILPCA_API int64_t tailpca_matrix_cols(const tailpca_matrix* m);
TAILPCA_API tailpca_status tailpca_matrix_get(const tailpca_matrix* m, int64_t row,
                                              int64_t col, double* out);

/* Writes the matrix as plain CSV with full round-trip precision. */
TAILPCA_API tailpca_status tailpca_matrix_write_csv(const tailpca_matrix* m,
                                                    const char* path);

/* Rank-based transform of every column to standard-Frechet margins.
 * n_constant_columns (optional) reports how many columns were completely
 * tied; their transformed values are constant. */
TAILPCA_API tailpca_status tailpca_matrix_frechet_margins(const tailpca_matrix* m,
                                                          tailpca_matrix** out,
                                                          int64_t* n_constant_columns);

TAILPCA_API void tailpca_matrix_free(tailpca_matrix* m);

/* -------------------------------------------------------------- spectrum */

/* Full pipeline from data to eigenvalues: keep the k largest-norm rows,
 * normalize them, form the angular covariance (divisor k) and return its
 * descending spectrum. Requires 2 <= k < rows. */
TAILPCA_API tailpca_status tailpca_angular_spectrum(const tailpca_matrix* m, int64_t k,
                                                    tailpca_spectrum** out);

/* Spectrum from caller-provided descending eigenvalues (for synthetic use).
 * d is the length of `values`; k records the extreme count. */
TAILPCA_API tailpca_status tailpca_spectrum_create(const double* values, int64_t d,
                                                   int64_t k, tailpca_spectrum** out);

TAILPCA_API int64_t tailpca_spectrum_size(const tailpca_spectrum* s);
TAILPCA_API int64_t tailpca_spectrum_k(const tailpca_spectrum* s);

/* Copies all eigenvalues (descending) into `out`, which must hold size(). */
TAILPCA_API tailpca_status tailpca_spectrum_values(const tailpca_spectrum* s, double* out);

/* Scree diagnostics: `scaled` receives `limit` values, `increments`
 * limit-1 values (either pointer may be NULL to skip). */
TAILPCA_API tailpca_status tailpca_spectrum_scree(const tailpca_spectrum* s, int64_t limit,
                                                  double* scaled, double* increments);

TAILPCA_API void tailpca_spectrum_free(tailpca_spectrum* s);

/* -------------------------------------------------------------- criteria */

/* Regime choice: k > d gives the fixed pair (aic, bic); d > k the star
 * pair; d = k is an error. Requires d >= 3, k >= 3. */
TAILPCA_API tailpca_status tailpca_select_regime(int64_t d, int64_t k,
                                                 tailpca_criterion* aic_kind,
                                                 tailpca_criterion* bic_kind);

/* Default candidate bound: d-2 in the fixed regime, min(k-2, ceil(d/2))
 * in the star regime. */
TAILPCA_API tailpca_status tailpca_default_q(int64_t d, int64_t k, int64_t* out);

TAILPCA_API tailpca_status tailpca_criterion_value(tailpca_criterion kind,
                                                   const tailpca_spectrum* s, int64_t k,
                                                   int64_t p, double* out);

/* Evaluates the criterion over p = 1..q and locates the smallest argmin. */
TAILPCA_API tailpca_status tailpca_estimate_p(const tailpca_spectrum* s, int64_t k,
                                              tailpca_criterion kind, int64_t q,
                                              tailpca_curve** out);

TAILPCA_API int64_t tailpca_curve_p_hat(const tailpca_curve* c);
TAILPCA_API int64_t tailpca_curve_q(const tailpca_curve* c);
TAILPCA_API tailpca_status tailpca_curve_kind(const tailpca_curve* c,
                                              tailpca_criterion* out);

/* Copies the q criterion values (index i holds p = i+1). */
TAILPCA_API tailpca_status tailpca_curve_values(const tailpca_curve* c, double* out);

/* Serialized forms; free the returned string with tailpca_string_free. */
TAILPCA_API tailpca_status tailpca_curve_to_csv(const tailpca_curve* c, char** out);
TAILPCA_API tailpca_status tailpca_curve_to_json(const tailpca_curve* c, char** out);

TAILPCA_API void tailpca_curve_free(tailpca_curve* c);

/* ---------------------------------------------------------------- theory */

/* Spike map x(1 + c/(x-1)); x > 1, c > 0, c != 1. */
TAILPCA_API tailpca_status tailpca_phi_c(double x, double c, double* out);

/* Bulk density, its point mass at zero (c > 1 only), distribution function
 * and quantile of the limiting spectral law with ratio c. */
TAILPCA_API tailpca_status tailpca_mp_density(double x, double c, double* out);
TAILPCA_API tailpca_status tailpca_mp_point_mass(double c, double* out);
TAILPCA_API tailpca_status tailpca_mp_cdf(double x, double c, double* out);
TAILPCA_API tailpca_status tailpca_mp_quantile(double alpha, double c, double* out);

/* Support edges (1 -/+ sqrt(c))^2 of the continuous bulk. */
TAILPCA_API tailpca_status tailpca_mp_support(double c, double* lower, double* upper);

TAILPCA_API tailpca_status tailpca_distant_spike(double xi, double c, int* out);

/* Consistency margins; `satisfied` (optional) receives margin > 0. */
TAILPCA_API tailpca_status tailpca_gap_condition(double xi, double c, double* margin,
                                                 int* satisfied);
TAILPCA_API tailpca_status tailpca_modified_gap_condition(double xi, double c,
                                                          double* margin, int* satisfied);

/* Predicted rescaled empirical eigenvalue for a population spike xi. */
TAILPCA_API tailpca_status tailpca_spike_forecast(double xi, double c, int* is_distant,
                                                  double* predicted);

/* -------------------------------------------------------------- simulate */

/* Model specs travel as JSON, e.g.
 *   {"model":"directional","d":20,"n":10000,"p_star":10,
 *    "spike_values":[20,20,20,20,20,20,20,20,20,20],"k":1500,"seed":7}
 * model is "directional", "noisy-directional" or "spiked-angular-gaussian";
 * k is an integer count or a fraction of n in (0,1); optional fields are
 * "bulk_lambda" (spiked angular Gaussian), "seed" and "v_dist"
 * ("normal"/"rademacher"). */

/* Parses a model spec and reports its dimension, sample count and resolved
 * extreme count (fractions resolve by round-half-up on fraction*n, floored
 * at 3 and capped at n-1). Any output pointer may be NULL. */
TAILPCA_API tailpca_status tailpca_model_dims(const char* model_spec_json, int64_t* d,
                                              int64_t* n, int64_t* k_resolved);

/* Draws one dataset from the model. */
TAILPCA_API tailpca_status tailpca_sample_model(const char* model_spec_json,
                                                tailpca_matrix** out);

/* Runs the model end to end for `replications` seeded replications and the
 * given criteria. q <= 0 selects the regime default. Identical inputs give
 * bit-identical results for any worker count. */
TAILPCA_API tailpca_status tailpca_experiment_run(const char* model_spec_json,
                                                  int64_t replications,
                                                  const tailpca_criterion* kinds,
                                                  int64_t n_kinds, int64_t q, int workers,
                                                  tailpca_experiment** out);

TAILPCA_API int64_t tailpca_experiment_replications(const tailpca_experiment* e);
TAILPCA_API int64_t tailpca_experiment_n_kinds(const tailpca_experiment* e);
TAILPCA_API int64_t tailpca_experiment_k(const tailpca_experiment* e);
TAILPCA_API int64_t tailpca_experiment_q(const tailpca_experiment* e);

/* Copies the per-replication estimates for one criterion (by position in
 * the `kinds` array passed to tailpca_experiment_run). */
TAILPCA_API tailpca_status tailpca_experiment_p_hats(const tailpca_experiment* e,
                                                     int64_t kind_index, int64_t* out);

/* Long-format CSV ("replication,kind,p_hat") and JSON summary with a
 * per-kind histogram of the estimates. */
TAILPCA_API tailpca_status tailpca_experiment_to_csv(const tailpca_experiment* e,
                                                     char** out);
TAILPCA_API tailpca_status tailpca_experiment_summary_json(const tailpca_experiment* e,
                                                           char** out);

TAILPCA_API void tailpca_experiment_free(tailpca_experiment* e);

TAILPCA_API void tailpca_string_free(char* s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* TAILPCA_H */
