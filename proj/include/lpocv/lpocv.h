/* C interface to the leave-p-out cross-validation library.
 *
 * Every fallible call returns an lpocv_status; on failure lpocv_last_error() holds a
 * message for the calling thread. Strings returned through char** are owned by the
 * caller and released with lpocv_string_free. Handles are released with their _free
 * function; passing NULL to a _free function is a no-op. */
#ifndef LPOCV_LPOCV_H
#define LPOCV_LPOCV_H

#include <stddef.h>
#include <stdint.h>

#if defined(LPOCV_BUILDING)
#define LPOCV_API __attribute__((visibility("default")))
#else
#define LPOCV_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lpocv_status {
  LPOCV_OK = 0,
  LPOCV_INVALID_ARGUMENT = 1,
  LPOCV_OUT_OF_RANGE = 2,
  LPOCV_EMPTY_SAMPLE = 3,
  LPOCV_INVALID_P = 4,
  LPOCV_CAP_EXCEEDED = 5,
  LPOCV_OVERFLOW = 6,
  LPOCV_PARSE_ERROR = 7,
  LPOCV_IO_ERROR = 8,
  LPOCV_INFEASIBLE = 9,
  LPOCV_INTERNAL = 99
} lpocv_status;

typedef struct lpocv_model lpocv_model;
typedef struct lpocv_sample lpocv_sample;
typedef struct lpocv_density lpocv_density;
typedef struct lpocv_collection lpocv_collection;

LPOCV_API const char* lpocv_last_error(void);
LPOCV_API const char* lpocv_status_name(lpocv_status status);
LPOCV_API int lpocv_schema_version(void);
LPOCV_API void lpocv_string_free(char* s);

/* Models. JSON descriptors look like {"family": "histogram", "params": {"D": 4}}. */
LPOCV_API lpocv_status lpocv_model_from_json(const char* json, lpocv_model** out);
LPOCV_API lpocv_status lpocv_model_histogram(size_t bins, lpocv_model** out);
LPOCV_API lpocv_status lpocv_model_trigonometric(size_t cutoff, lpocv_model** out);
LPOCV_API lpocv_status lpocv_model_haar_scaling(unsigned level, lpocv_model** out);
LPOCV_API lpocv_status lpocv_model_haar_wavelet(unsigned max_level, lpocv_model** out);
LPOCV_API lpocv_status lpocv_model_piecewise_polynomial(unsigned depth, unsigned degree_bound, lpocv_model** out);
LPOCV_API lpocv_status lpocv_model_dim(const lpocv_model* model, size_t* out);
LPOCV_API lpocv_status lpocv_model_to_json(const lpocv_model* model, char** out);
LPOCV_API void lpocv_model_free(lpocv_model* model);

/* Samples. column_name selects a CSV column by header; column_index >= 0 selects by
 * position (0-based) and header != 0 skips a header line; otherwise one value per line. */
LPOCV_API lpocv_status lpocv_sample_create(const double* values, size_t n, lpocv_sample** out);
LPOCV_API lpocv_status lpocv_sample_read(const char* path, const char* column_name, long column_index, int header,
                                         lpocv_sample** out);
LPOCV_API lpocv_status lpocv_sample_size(const lpocv_sample* sample, size_t* out);
LPOCV_API lpocv_status lpocv_sample_values(const lpocv_sample* sample, double* out, size_t capacity);
LPOCV_API void lpocv_sample_free(lpocv_sample* sample);

/* Known densities for simulation mode. */
LPOCV_API lpocv_status lpocv_density_from_json(const char* json, lpocv_density** out);
LPOCV_API lpocv_status lpocv_density_sample(const lpocv_density* density, size_t n, uint64_t seed, lpocv_sample** out);
LPOCV_API lpocv_status lpocv_density_true_risk(const lpocv_density* density, const lpocv_model* model, size_t n,
                                               double* out);
LPOCV_API void lpocv_density_free(lpocv_density* density);

/* Leave-p-out risk. */
LPOCV_API lpocv_status lpocv_risk(const lpocv_model* model, const lpocv_sample* sample, size_t p, double* out);
LPOCV_API lpocv_status lpocv_risk_brute(const lpocv_model* model, const lpocv_sample* sample, size_t p, uint64_t cap,
                                        double* out);
/* {model, n, p, risk}; brute != 0 forces exhaustive resampling up to cap subsets. */
LPOCV_API lpocv_status lpocv_risk_json(const lpocv_model* model, const lpocv_sample* sample, size_t p, int brute,
                                       uint64_t cap, char** out);

/* Projection estimate: JSON descriptor with coefficients, and a CSV grid x,s_hat(x). */
LPOCV_API lpocv_status lpocv_estimate_json(const lpocv_model* model, const lpocv_sample* sample, char** out);
LPOCV_API lpocv_status lpocv_density_grid_csv(const lpocv_model* model, const lpocv_sample* sample, size_t points,
                                              char** out);

/* Collections: kind is "pc", "pp" or "tp"; max_dim = 0 means no cap beyond the regularity bound. */
LPOCV_API lpocv_status lpocv_collection_build(const char* kind, size_t n, double phi, unsigned degree_bound,
                                              size_t max_dim, lpocv_collection** out);
LPOCV_API lpocv_status lpocv_collection_from_models(const lpocv_model* const* models, size_t count, double phi,
                                                    lpocv_collection** out);
LPOCV_API lpocv_status lpocv_collection_size(const lpocv_collection* collection, size_t* out);
LPOCV_API void lpocv_collection_free(lpocv_collection* collection);

/* Model selection; threads = 0 uses LPOCV_THREADS or the hardware concurrency. */
LPOCV_API lpocv_status lpocv_select_json(const lpocv_collection* collection, const lpocv_sample* sample, size_t p,
                                         unsigned threads, char** out);
/* Assumption report; density may be NULL (data-only mode). */
LPOCV_API lpocv_status lpocv_check_json(const lpocv_collection* collection, size_t n, const lpocv_density* density,
                                        char** out);
/* Default p: midpoint of the admissible range, with epsilon from solving the admissibility inequality.
 * detail (nullable) receives {epsilon, range}. */
LPOCV_API lpocv_status lpocv_auto_p(size_t n, double alpha, double beta, size_t* p, char** detail);

/* Moments of the leave-p-out risk under a known density. */
LPOCV_API lpocv_status lpocv_moments_json(const lpocv_model* model, const lpocv_density* density, size_t n, size_t p,
                                          char** out);
/* Penalty decomposition at one p, and the CSV sweep p,pen_p,C_over for p = 1..n-1. */
LPOCV_API lpocv_status lpocv_penalty_json(const lpocv_model* model, const lpocv_sample* sample, size_t p, char** out);
LPOCV_API lpocv_status lpocv_penalty_sweep_csv(const lpocv_model* model, const lpocv_sample* sample, char** out);

/* Experiments: kind is "oracle-ratio" or "adaptivity"; config is the JSON experiment
 * description. seed_override < 0 keeps the config's seed. csv_out may be NULL. */
LPOCV_API lpocv_status lpocv_simulate(const char* kind, const char* config_json, int64_t seed_override,
                                      long replications_override, unsigned threads, char** json_out, char** csv_out);

/* Closed form against exhaustive resampling; passed receives 1 when every check passes. */
LPOCV_API lpocv_status lpocv_verify(size_t cases, uint64_t seed, char** table_out, char** json_out, int* passed);

#ifdef __cplusplus
}
#endif

#endif
