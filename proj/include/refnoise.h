/* refnoise — reference-label noise simulator for diagnostic evaluation.
 *
 * C interface to the engine: opaque handles, integer status codes, and
 * plain structs. Undefined metrics (zero reference-positive or
 * reference-negative totals) cross this boundary as NaN. Every function
 * that can fail takes an optional error buffer which receives a
 * NUL-terminated diagnostic on non-zero return.
 *
 * Rates (prevalence, sensitivities, specificities) accept percent or
 * fraction: values above 1 are percents, exactly 1 is the fraction 1.0.
 */

#ifndef REFNOISE_H
#define REFNOISE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RN_API __declspec(dllexport)
#else
#define RN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rn_status {
    RN_OK = 0,
    RN_ERR_INVALID = 1,   /* invalid argument or validation failure */
    RN_ERR_IO = 2,        /* file could not be read or written */
    RN_ERR_TOO_LARGE = 3, /* cohort above the enumeration limit */
    RN_ERR_EMPTY = 4      /* empty record set */
} rn_status;

enum { RN_FORMAT_CSV = 0, RN_FORMAT_JSONL = 1 };
enum { RN_METRIC_SENSITIVITY = 0, RN_METRIC_SPECIFICITY = 1 };

RN_API const char* rn_version(void);

/* ----- analytic point estimate and best/worst bounds ------------------ */

typedef struct rn_bounds {
    double point_sens, point_spec;
    double best_sens, worst_sens, range_sens;
    double best_spec, worst_spec, range_spec;
} rn_bounds;

RN_API rn_status rn_compute_bounds(int64_t n_total, double prevalence, double model_se,
                                   double model_sp, double ref_se, double ref_sp,
                                   rn_bounds* out, char* err, size_t err_len);

/* ----- Monte Carlo ----------------------------------------------------- */

typedef struct rn_metric_summary {
    double min, max, mean, stddev;
    double q025, median, q975;
    int64_t defined_trials; /* trials where the metric had a denominator */
} rn_metric_summary;

typedef struct rn_mc_summary {
    rn_metric_summary sensitivity;
    rn_metric_summary specificity;
    int64_t n_trials;
    uint64_t seed;
} rn_mc_summary;

/* Deterministic for fixed inputs and seed, independent of `threads`
 * (0 = number of hardware threads). */
RN_API rn_status rn_run_monte_carlo(int64_t n_total, double prevalence, double model_se,
                                    double model_sp, double ref_se, double ref_sp,
                                    int64_t n_trials, uint64_t seed, int threads,
                                    rn_mc_summary* out, char* err, size_t err_len);

/* ----- exhaustive enumeration oracle ----------------------------------- */

#define RN_ORACLE_MAX_TOTAL 100

typedef struct rn_oracle_result {
    double sens_min, sens_max; /* NaN when the metric is undefined */
    double spec_min, spec_max;
    int64_t tables_enumerated;
    int matches_closed_form; /* 1 iff extrema equal the closed-form bounds */
} rn_oracle_result;

/* Requires integer marginals (rate x stratum size) and
 * n_total <= RN_ORACLE_MAX_TOTAL; rejects anything else. */
RN_API rn_status rn_run_oracle(int64_t n_total, double prevalence, double model_se,
                               double model_sp, double ref_se, double ref_sp,
                               rn_oracle_result* out, char* err, size_t err_len);

/* ----- parameter sweeps ------------------------------------------------ */

typedef struct rn_sweep rn_sweep;     /* sweep specification */
typedef struct rn_records rn_records; /* computed result set */

/* Defaults: n_total 10000, reference grid 90..100% step 1%, 5000 trials,
 * seed 42, Monte Carlo off, no prevalences or model points. */
RN_API rn_sweep* rn_sweep_new(void);
RN_API void rn_sweep_free(rn_sweep* sweep);

RN_API rn_status rn_sweep_set_n_total(rn_sweep* sweep, int64_t n_total, char* err, size_t err_len);
RN_API rn_status rn_sweep_add_prevalence(rn_sweep* sweep, double prevalence, char* err,
                                         size_t err_len);
RN_API rn_status rn_sweep_add_model(rn_sweep* sweep, double se, double sp, char* err,
                                    size_t err_len);
RN_API rn_status rn_sweep_set_grid(rn_sweep* sweep, double lo, double hi, double step, char* err,
                                   size_t err_len);
RN_API rn_status rn_sweep_set_trials(rn_sweep* sweep, int64_t n_trials, char* err, size_t err_len);
RN_API rn_status rn_sweep_set_seed(rn_sweep* sweep, uint64_t seed, char* err, size_t err_len);
RN_API rn_status rn_sweep_set_monte_carlo(rn_sweep* sweep, int enabled, char* err, size_t err_len);

/* Replaces the sweep definition with the contents of a flat key/value
 * config file (see the repo's configs/ directory for the format by
 * example). */
RN_API rn_status rn_sweep_load_config(rn_sweep* sweep, const char* path, char* err,
                                      size_t err_len);

RN_API rn_status rn_sweep_run(const rn_sweep* sweep, int threads, rn_records** out, char* err,
                              size_t err_len);
RN_API void rn_records_free(rn_records* records);
RN_API int64_t rn_records_count(const rn_records* records);

typedef struct rn_record {
    int64_t n_total;
    double prevalence, model_se, model_sp, ref_se, ref_sp;
    rn_bounds metrics;
    int has_mc;
    rn_mc_summary mc; /* zeroed when has_mc == 0 */
    uint64_t seed;
} rn_record;

RN_API rn_status rn_records_get(const rn_records* records, int64_t index, rn_record* out,
                                char* err, size_t err_len);

/* Atomic file emitters (temp file + rename). Plots require the records
 * to form a complete rectangular reference grid for one prevalence and
 * one model point. */
RN_API rn_status rn_records_write_table(const rn_records* records, const char* path, int format,
                                        char* err, size_t err_len);
RN_API rn_status rn_records_write_heatmap(const rn_records* records, const char* path, int metric,
                                          char* err, size_t err_len);
RN_API rn_status rn_records_write_forest(const rn_records* records, const char* path, char* err,
                                         size_t err_len);

/* Keeps records whose (prevalence, model) match to 1e-6; returns a new
 * handle. */
RN_API rn_status rn_records_filter(const rn_records* records, double prevalence, double model_se,
                                   double model_sp, rn_records** out, char* err, size_t err_len);

typedef struct rn_extreme {
    double min_range, max_range;
    double argmax_prevalence, argmax_model_se, argmax_model_sp;
    double argmax_ref_se, argmax_ref_sp;
    int defined;
} rn_extreme;

typedef struct rn_axis_delta {
    double shrink; /* range at axis low end minus range at axis high end, maximized */
    double fixed_other, prevalence, model_se, model_sp;
    int defined;
} rn_axis_delta;

typedef struct rn_extremes {
    rn_extreme sensitivity, specificity;
    rn_axis_delta sens_from_ref_se, sens_from_ref_sp;
    rn_axis_delta spec_from_ref_se, spec_from_ref_sp;
} rn_extremes;

RN_API rn_status rn_records_extremes(const rn_records* records, rn_extremes* out, char* err,
                                     size_t err_len);

/* ----- verification battery -------------------------------------------- */

/* Runs the built-in battery of exact expected values and Monte Carlo
 * contracts; *text_out receives the formatted report (release with
 * rn_string_free) and *n_failed the failing check count. Analytic checks
 * are seed-free; stochastic checks use a pinned internal seed. */
RN_API rn_status rn_run_verification(char** text_out, int* n_checks, int* n_failed, char* err,
                                     size_t err_len);
RN_API void rn_string_free(char* text);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* REFNOISE_H */
