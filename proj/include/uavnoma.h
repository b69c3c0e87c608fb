/* SPDX-License-Identifier: Apache-2.0 */

/* C interface to the uavnoma evaluator.
 *
 * Every function returns a uavnoma_status. On failure a message describing
 * the error is available from uavnoma_last_error() on the same thread until
 * the next call. Strings returned through out-parameters are owned by the
 * caller and released with uavnoma_string_free(). */

#ifndef UAVNOMA_H
#define UAVNOMA_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define UAVNOMA_API __declspec(dllexport)
#else
#define UAVNOMA_API __attribute__((visibility("default")))
#endif

typedef enum uavnoma_status {
  UAVNOMA_OK = 0,
  UAVNOMA_INVALID_ARGUMENT = 1,
  UAVNOMA_CONFIG = 2,
  UAVNOMA_NUMERICAL = 3,
  UAVNOMA_IO = 4,
  UAVNOMA_INTERNAL = 5
} uavnoma_status;

typedef enum uavnoma_paths { UAVNOMA_PATHS_MC = 0, UAVNOMA_PATHS_ANALYTIC = 1, UAVNOMA_PATHS_BOTH = 2 } uavnoma_paths;

/* Association cases, in CSV order. */
typedef enum uavnoma_case {
  UAVNOMA_NONCOMP_L = 0,
  UAVNOMA_NONCOMP_N = 1,
  UAVNOMA_COMP_LL = 2,
  UAVNOMA_COMP_NN = 3,
  UAVNOMA_COMP_LN = 4,
  UAVNOMA_COMP_NL = 5
} uavnoma_case;

typedef struct uavnoma_experiment uavnoma_experiment;
typedef struct uavnoma_result uavnoma_result;
typedef struct uavnoma_model uavnoma_model;

UAVNOMA_API const char* uavnoma_version(void);
UAVNOMA_API const char* uavnoma_last_error(void);
UAVNOMA_API const char* uavnoma_status_name(uavnoma_status status);
UAVNOMA_API void uavnoma_string_free(char* s);

/* Experiments */
UAVNOMA_API uavnoma_status uavnoma_experiment_defaults(uavnoma_experiment** out);
UAVNOMA_API uavnoma_status uavnoma_experiment_from_text(const char* text, uavnoma_experiment** out);
UAVNOMA_API uavnoma_status uavnoma_experiment_from_file(const char* path, uavnoma_experiment** out);
UAVNOMA_API void uavnoma_experiment_free(uavnoma_experiment* exp);
UAVNOMA_API uavnoma_status uavnoma_experiment_set_seed(uavnoma_experiment* exp, uint64_t seed);
UAVNOMA_API uavnoma_status uavnoma_experiment_set_iterations(uavnoma_experiment* exp, uint64_t iterations);
UAVNOMA_API uavnoma_status uavnoma_experiment_set_output(uavnoma_experiment* exp, const char* path);
UAVNOMA_API uavnoma_status uavnoma_experiment_set_paths(uavnoma_experiment* exp, uavnoma_paths paths);
/* Output path currently configured. The pointer stays valid until the next setter call. */
UAVNOMA_API const char* uavnoma_experiment_output(const uavnoma_experiment* exp);
/* Renders the experiment in config-file syntax. */
UAVNOMA_API uavnoma_status uavnoma_experiment_format(const uavnoma_experiment* exp, char** out);
UAVNOMA_API uavnoma_status uavnoma_experiment_run(const uavnoma_experiment* exp, uavnoma_result** out);

/* Results */
UAVNOMA_API void uavnoma_result_free(uavnoma_result* res);
UAVNOMA_API size_t uavnoma_result_rows(const uavnoma_result* res);
UAVNOMA_API uavnoma_status uavnoma_result_csv(const uavnoma_result* res, char** out);
/* Writes the CSV atomically (temporary file, then rename). */
UAVNOMA_API uavnoma_status uavnoma_result_write(const uavnoma_result* res, const char* path);

/* Analytical model for the experiment's base network and a named scheme
 * (comp_noma, comp_oma, noma_only, oma_only). Thresholds are linear. */
UAVNOMA_API uavnoma_status uavnoma_model_create(const uavnoma_experiment* exp, const char* scheme,
                                                uavnoma_model** out);
UAVNOMA_API void uavnoma_model_free(uavnoma_model* model);
UAVNOMA_API uavnoma_status uavnoma_model_assoc_prob(const uavnoma_model* model, uavnoma_case c, double* value);
UAVNOMA_API uavnoma_status uavnoma_model_coverage_case(const uavnoma_model* model, uavnoma_case c, double threshold,
                                                       double* value);
UAVNOMA_API uavnoma_status uavnoma_model_coverage_au(const uavnoma_model* model, double threshold, double* value);
UAVNOMA_API uavnoma_status uavnoma_model_coverage_tu(const uavnoma_model* model, double threshold, double* value);
/* Rates in bit/s/Hz: AU non-CoMP, AU CoMP, TU, total. Any pointer may be NULL. */
UAVNOMA_API uavnoma_status uavnoma_model_rates(const uavnoma_model* model, double* au_noncomp, double* au_comp,
                                               double* tu, double* total);

#ifdef __cplusplus
}
#endif

#endif /* UAVNOMA_H */
