/*
 * Copyright 2026 The occulab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef OCCULAB_OCCULAB_H
#define OCCULAB_OCCULAB_H

/*
 * C interface to the occulab core: exact fBm sampling, occupation
 * functionals at the critical index H = 1/d, their limit constants, the
 * Monte Carlo limit-law harness and the deterministic inequality sweeps.
 *
 * Every function returns an occ_status. On failure the thread-local message
 * returned by occ_last_error() describes the problem. Objects are opaque and
 * must be released with the matching *_destroy function.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(OCCULAB_BUILDING_LIBRARY)
#    define OCC_API __declspec(dllexport)
#  else
#    define OCC_API __declspec(dllimport)
#  endif
#else
#  define OCC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum occ_status {
  OCC_OK = 0,
  OCC_ERR_DOMAIN = 1,
  OCC_ERR_INVALID_ARGUMENT = 2,
  OCC_ERR_EMBEDDING_NOT_PSD = 3,
  OCC_ERR_NOT_POSITIVE_DEFINITE = 4,
  OCC_ERR_DIVERGENT_INTEGRAL = 5,
  OCC_ERR_UNSUPPORTED_DIMENSION = 6,
  OCC_ERR_GRID_TOO_LARGE = 7,
  OCC_ERR_HORIZON_EXHAUSTED = 8,
  OCC_ERR_IO = 9,
  OCC_ERR_INTERNAL = 99
} occ_status;

OCC_API const char* occ_status_name(occ_status status);
OCC_API const char* occ_last_error(void);
OCC_API const char* occ_version(void);

/* ---- test functions ---------------------------------------------------- */

typedef struct occ_function occ_function;

/* "gaussdiff:sigma=2", "gaussdiff:sigma=2,scale=-1", "gauss", "zero",
 * "const:value=1.5" (constant f is for sanity checks only). */
OCC_API occ_status occ_function_parse(const char* spec, int dim, occ_function** out);
OCC_API void occ_function_destroy(occ_function* f);
OCC_API int occ_function_dim(const occ_function* f);
OCC_API occ_status occ_function_eval(const occ_function* f, const double* x, double* out);
OCC_API occ_status occ_function_fourier(const occ_function* f, const double* xi, double* out);
/* Writes at most `capacity` bytes including the terminator. */
OCC_API occ_status occ_function_describe(const occ_function* f, char* buffer, size_t capacity);

/* ---- fractional Brownian motion ---------------------------------------- */

typedef struct occ_fbm_spec {
  double hurst;
  int dim;
  double step;
  int64_t n_steps;
  int critical; /* nonzero: require hurst * dim == 1 */
} occ_fbm_spec;

typedef enum occ_sampler { OCC_SAMPLER_CIRCULANT = 0, OCC_SAMPLER_CHOLESKY = 1 } occ_sampler;

typedef struct occ_path occ_path;

OCC_API occ_status occ_covariance(double s, double t, double hurst, double* out);
OCC_API occ_status occ_fgn_autocovariance(int64_t lag, double hurst, double* out);
OCC_API occ_status occ_fbm_sample(const occ_fbm_spec* spec, occ_sampler sampler,
                                  uint64_t seed, uint64_t replica, occ_path** out);
OCC_API void occ_path_destroy(occ_path* path);
OCC_API size_t occ_path_points(const occ_path* path);
OCC_API int occ_path_dim(const occ_path* path);
/* Borrowed pointers, valid until occ_path_destroy. values is points x dim. */
OCC_API const double* occ_path_times(const occ_path* path);
OCC_API const double* occ_path_values(const occ_path* path);
OCC_API occ_status occ_path_write_csv(const occ_path* path, const char* filename);

/* ---- limit constants --------------------------------------------------- */

typedef struct occ_limit_constant {
  double c_fd;
  double c_fd_squared;
  double quadrature_error_estimate;
} occ_limit_constant;

OCC_API occ_status occ_c_fd(const occ_function* f, occ_limit_constant* out);
OCC_API occ_status occ_bracket(const occ_function* f, double* value, double* error_estimate);
OCC_API occ_status occ_norm1_residual(const occ_function* f, double* out);
OCC_API occ_status occ_gamma_identity_check(int dim, double* out);

/* ---- occupation functional ---------------------------------------------- */

typedef struct occ_occupation_config {
  double n;
  double t;
  double spacing;   /* <= 0 selects the default 0.5 */
  int64_t grid_cap; /* <= 0 selects the default 2^26 */
  int far_field_skip; /* H = 1/2 only; nonzero enables block skipping */
} occ_occupation_config;

OCC_API void occ_occupation_config_default(occ_occupation_config* config);
OCC_API occ_status occ_occupation_realize(const occ_function* f, const occ_occupation_config* config,
                                          uint64_t seed, uint64_t replica, double* out);
/* F_n(t_i) for ascending t_list, from one path. out has `count` slots. */
OCC_API occ_status occ_occupation_realize_multi(const occ_function* f,
                                                const occ_occupation_config* config,
                                                const double* t_list, size_t count,
                                                uint64_t seed, uint64_t replica, double* out);

/* ---- limit-law harness --------------------------------------------------- */

#define OCC_MAX_ORDER 6

typedef struct occ_estimate {
  double value;
  double se;
} occ_estimate;

typedef struct occ_moment_summary {
  double estimate[OCC_MAX_ORDER]; /* raw moments of order 1..6 */
  double se[OCC_MAX_ORDER];
  double target[OCC_MAX_ORDER];
  occ_estimate mean;
  occ_estimate variance;
  occ_estimate kurtosis; /* excess */
  double ks_distance;
  double ks_se;
  int64_t replicas;
} occ_moment_summary;

OCC_API occ_status occ_target_moment(int m, double t, double c, double* out);

typedef struct occ_second_order {
  double c_fd;
  double laplace_scale;
  occ_moment_summary summary; /* of F / C_{f,d} */
} occ_second_order;

/* samples may be NULL; otherwise it receives `replicas` raw values. */
OCC_API occ_status occ_run_second_order(const occ_function* f, const occ_occupation_config* config,
                                        int64_t replicas, uint64_t seed, int workers,
                                        occ_second_order* out, double* samples);

typedef struct occ_first_order {
  double target_mean;
  occ_moment_summary summary;
} occ_first_order;

OCC_API occ_status occ_run_first_order(const occ_function* f, const occ_occupation_config* config,
                                       int64_t replicas, uint64_t seed, int workers,
                                       occ_first_order* out, double* samples);

typedef enum occ_z_mode { OCC_Z_EXCURSION = 0, OCC_Z_WALK = 1 } occ_z_mode;

typedef struct occ_z_sample {
  double t;
  double value;
  int64_t walk_steps;
  int64_t visits;
  int64_t steps_taken;
} occ_z_sample;

OCC_API occ_status occ_simulate_z(double t, int64_t walk_steps, uint64_t seed, uint64_t replica,
                                  occ_z_mode mode, occ_z_sample* out);

typedef struct occ_zprocess {
  double t;
  occ_estimate mean;
  double ks_distance;
} occ_zprocess;

OCC_API occ_status occ_run_zprocess(double t, int64_t walk_steps, int64_t replicas, uint64_t seed,
                                    int workers, occ_zprocess* out, double* samples);

typedef struct occ_fdd occ_fdd;

/* intervals: `count` pairs (a, b] flattened as a0, b0, a1, b1, ... */
OCC_API occ_status occ_run_fdd(const occ_function* f, const occ_occupation_config* config,
                               const double* intervals, size_t count, int64_t replicas,
                               uint64_t seed, int workers, occ_fdd** out);
OCC_API void occ_fdd_destroy(occ_fdd* fdd);
OCC_API size_t occ_fdd_intervals(const occ_fdd* fdd);
OCC_API double occ_fdd_c_fd(const occ_fdd* fdd);
OCC_API occ_status occ_fdd_summary(const occ_fdd* fdd, size_t i, occ_moment_summary* out);
/* Covariance of the raw increments i and j. */
OCC_API occ_status occ_fdd_covariance(const occ_fdd* fdd, size_t i, size_t j, occ_estimate* out);
/* E[X_i^2 X_j] for the standardized increments. */
OCC_API occ_status occ_fdd_skew(const occ_fdd* fdd, size_t i, size_t j, occ_estimate* out);
/* Borrowed: `replicas` raw increments of interval i. */
OCC_API const double* occ_fdd_increments(const occ_fdd* fdd, size_t i);

/* ---- deterministic sweeps ------------------------------------------------ */

#define OCC_MAX_PARAMETERS 16

typedef struct occ_check_report {
  char check_name[32];
  int64_t trials;
  int64_t violations;
  double worst_margin;
  size_t parameter_count;
  char parameter_names[OCC_MAX_PARAMETERS][32];
  double parameter_values[OCC_MAX_PARAMETERS];
} occ_check_report;

OCC_API occ_status occ_check_cov_bounds(int64_t trials, uint64_t seed, occ_check_report* out);
OCC_API occ_status occ_check_taylor_bound(int u_points, int v_points, int h_points,
                                          occ_check_report* out);
OCC_API occ_status occ_check_lnd(int n_points, int64_t trials, uint64_t seed, double hurst,
                                 int dim, occ_check_report* out);
OCC_API occ_status occ_check_lower_inequality(int u_points, int v_points, int x_points,
                                              occ_check_report* out);

#ifdef __cplusplus
}
#endif

#endif /* OCCULAB_OCCULAB_H */
