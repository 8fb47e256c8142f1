/* Copyright (C) 2026 The mrsampler Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the mrsampler library: mean-reverting diffusion schedules,
 * parameterization transforms, analytic oracle predictors, the MR fast
 * samplers with posterior-sampling and Euler-Maruyama baselines, and
 * diagnostics.
 *
 * Conventions:
 *  - Objects are opaque handles created by mrs_*_create* and released by the
 *    matching mrs_*_destroy. Destroying NULL is a no-op.
 *  - Every fallible call returns an mrs_status. On failure, a description is
 *    available from mrs_last_error() on the calling thread until the next
 *    failing call on that thread.
 *  - Vectors are contiguous arrays of `dim` doubles. Output buffers are
 *    caller-allocated with the documented length.
 *  - Handles are immutable after creation and may be shared across threads,
 *    except that a predictor built from a callback is only as thread-safe as
 *    the callback.
 */
#ifndef MRSAMPLER_MRSAMPLER_H
#define MRSAMPLER_MRSAMPLER_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MRSAMPLER_BUILDING)
#    define MRS_API __declspec(dllexport)
#  else
#    define MRS_API __declspec(dllimport)
#  endif
#else
#  define MRS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mrs_status {
  MRS_OK = 0,
  MRS_ERR_INVALID_ARGUMENT = 1, /* bad parameter or configuration */
  MRS_ERR_DOMAIN = 2,           /* time outside the valid interval, singular point */
  MRS_ERR_RANGE = 3,            /* log-SNR outside the representable interval */
  MRS_ERR_DIMENSION = 4,        /* vector lengths disagree */
  MRS_ERR_NUMERICAL = 5,        /* NaN or Inf during sampling */
  MRS_ERR_CALLBACK = 6,         /* a user predictor callback reported failure */
  MRS_ERR_INTERNAL = 7
} mrs_status;

typedef enum mrs_schedule_family {
  MRS_SCHEDULE_CONSTANT = 0,
  MRS_SCHEDULE_LINEAR = 1,
  MRS_SCHEDULE_COSINE = 2
} mrs_schedule_family;

typedef enum mrs_spacing { MRS_SPACING_UNIFORM_T = 0, MRS_SPACING_UNIFORM_LAMBDA = 1 } mrs_spacing;

typedef enum mrs_parameterization {
  MRS_PARAM_NOISE = 0,
  MRS_PARAM_DATA = 1,
  MRS_PARAM_VELOCITY = 2
} mrs_parameterization;

typedef enum mrs_solver_family {
  MRS_SOLVER_MR_SDE = 0,
  MRS_SOLVER_MR_ODE = 1,
  MRS_SOLVER_POSTERIOR = 2,
  MRS_SOLVER_EULER_MARUYAMA = 3
} mrs_solver_family;

typedef enum mrs_oracle_kind {
  MRS_ORACLE_DIRAC = 0,         /* params: x0[dim] */
  MRS_ORACLE_GAUSSIAN = 1,      /* params: m0[dim], scale = s0 */
  MRS_ORACLE_CONSTANT_NOISE = 2 /* params: c[dim] */
} mrs_oracle_kind;

typedef struct mrs_schedule mrs_schedule;
typedef struct mrs_predictor mrs_predictor;
typedef struct mrs_trajectory mrs_trajectory;
typedef struct mrs_pca mrs_pca;

/* Library version string, e.g. "1.0.0". */
MRS_API const char* mrs_version(void);

/* Message for the most recent failure on this thread ("" if none). */
MRS_API const char* mrs_last_error(void);

/* ---- schedule ----------------------------------------------------------- */

/* theta_a / theta_b: Constant uses theta_a only; Linear is (start, end);
 * Cosine is (min, max). */
MRS_API mrs_status mrs_schedule_create(mrs_schedule_family family, double theta_a, double theta_b, double sigma_inf,
                                       double t_max, mrs_schedule** out);
MRS_API void mrs_schedule_destroy(mrs_schedule* schedule);

MRS_API double mrs_schedule_t_max(const mrs_schedule* schedule);
MRS_API double mrs_schedule_sigma_inf(const mrs_schedule* schedule);

MRS_API mrs_status mrs_schedule_theta(const mrs_schedule* schedule, double t, double* out);
MRS_API mrs_status mrs_schedule_alpha(const mrs_schedule* schedule, double t, double* out);
MRS_API mrs_status mrs_schedule_sigma(const mrs_schedule* schedule, double t, double* out);
MRS_API mrs_status mrs_schedule_lambda(const mrs_schedule* schedule, double t, double* out);
MRS_API mrs_status mrs_schedule_t_of_lambda(const mrs_schedule* schedule, double lambda, double* out);
MRS_API mrs_status mrs_schedule_g_squared(const mrs_schedule* schedule, double t, double* out);
MRS_API mrs_status mrs_schedule_phi(const mrs_schedule* schedule, double t, double* out);

/* Writes nfe + 1 decreasing times from T to t_end into times_out. */
MRS_API mrs_status mrs_make_grid(const mrs_schedule* schedule, size_t nfe, mrs_spacing spacing, double t_end,
                                 double* times_out);

/* ---- forward process ---------------------------------------------------- */

/* mean_out[dim], std_out scalar. */
MRS_API mrs_status mrs_transition_moments(const mrs_schedule* schedule, size_t dim, const double* x0,
                                          const double* mu, double t, double* mean_out, double* std_out);
/* Draws x_t ~ p(x_t | x0) from the stream (seed, stream). */
MRS_API mrs_status mrs_forward_sample(const mrs_schedule* schedule, size_t dim, const double* x0, const double* mu,
                                      double t, uint64_t seed, uint64_t stream, double* x_out);

/* Fills out[count] with standard normals from the stream (seed, stream), in
 * the order mrs_sample consumes them: dim values for x_T, then one block of
 * dim values per noisy step. */
MRS_API mrs_status mrs_normal_draw(uint64_t seed, uint64_t stream, size_t count, double* out);

/* ---- parameterization transforms ---------------------------------------- */

/* Converts `value` given in parameterization `from` at (x, mu, t) into `to`. */
MRS_API mrs_status mrs_convert(const mrs_schedule* schedule, size_t dim, const double* x, const double* mu, double t,
                               mrs_parameterization from, const double* value, mrs_parameterization to,
                               double* out);

/* ---- predictors --------------------------------------------------------- */

typedef struct mrs_oracle_spec {
  mrs_oracle_kind kind;
  size_t dim;
  const double* params; /* x0, m0 or c, length dim */
  double scale;         /* s0 for MRS_ORACLE_GAUSSIAN, ignored otherwise */
} mrs_oracle_spec;

MRS_API mrs_status mrs_predictor_create_oracle(const mrs_schedule* schedule, const mrs_oracle_spec* spec,
                                               mrs_parameterization out_kind, mrs_predictor** out);

/* User model. Must write dim values to `out` and return 0, or return nonzero
 * on failure. Must be pure: it may be called repeatedly with the same input. */
typedef int (*mrs_predictor_fn)(void* user_data, size_t dim, const double* x, const double* mu, double t,
                                double* out);

MRS_API mrs_status mrs_predictor_create_callback(mrs_parameterization kind, size_t dim, mrs_predictor_fn fn,
                                                 void* user_data, mrs_predictor** out);
MRS_API void mrs_predictor_destroy(mrs_predictor* predictor);

MRS_API size_t mrs_predictor_dim(const mrs_predictor* predictor);
MRS_API mrs_parameterization mrs_predictor_kind(const mrs_predictor* predictor);
MRS_API mrs_status mrs_predictor_eval(const mrs_predictor* predictor, const double* x, const double* mu, double t,
                                      double* out);

/* ---- sampling ----------------------------------------------------------- */

typedef struct mrs_sampler_spec {
  mrs_solver_family family;
  mrs_parameterization parameterization; /* NOISE or DATA for MR families */
  int order;                             /* 1 or 2, MR families only */
  size_t nfe;
  mrs_spacing spacing;
  double t_end; /* <= 0 selects the default 1e-3 * T */
  uint64_t seed;
  uint64_t chain; /* per-chain stream under `seed` */
  int denoise_final;
} mrs_sampler_spec;

/* Fills `spec` with defaults: MR-SDE, data, order 1, nfe 10, uniform lambda. */
MRS_API void mrs_sampler_spec_init(mrs_sampler_spec* spec);

/* Number of N(0, I) vectors a run consumes after x_T (0 for MR-ODE). */
MRS_API size_t mrs_sampler_noise_count(const mrs_sampler_spec* spec);

/* Runs one chain: x_T = mu + sigma_inf z0 and per-step noise drawn from
 * (seed, chain). */
MRS_API mrs_status mrs_sample(const mrs_schedule* schedule, const mrs_predictor* predictor,
                              const mrs_sampler_spec* spec, const double* mu, mrs_trajectory** out);

/* Runs one chain from an explicit x_T and noise (noise_count * dim values,
 * step-major; may be NULL when noise_count is 0). `times` optionally
 * overrides the grid (nfe + 1 values); pass NULL to build it from spec. */
MRS_API mrs_status mrs_sample_with_noise(const mrs_schedule* schedule, const mrs_predictor* predictor,
                                         const mrs_sampler_spec* spec, const double* times, const double* mu,
                                         const double* x_T, const double* noise, mrs_trajectory** out);

/* Aggregates fine-grid noise (fine_spec->nfe * dim values) into the noise of
 * the grid keeping every `stride`-th point; writes (nfe / stride) * dim
 * values. */
MRS_API mrs_status mrs_coarsen_noise(const mrs_schedule* schedule, const mrs_sampler_spec* fine_spec,
                                     const double* fine_times, size_t dim, const double* fine_noise, size_t stride,
                                     double* coarse_out);

/* Exact terminal moments for a point mass at x0, from x_T ~ N(mu, sigma_inf^2 I). */
MRS_API mrs_status mrs_dirac_terminal_moments(const mrs_schedule* schedule, int stochastic, size_t dim,
                                              const double* x0, const double* mu, double t_end, double* mean_out,
                                              double* var_out);

MRS_API void mrs_trajectory_destroy(mrs_trajectory* trajectory);
MRS_API size_t mrs_trajectory_dim(const mrs_trajectory* trajectory);
MRS_API size_t mrs_trajectory_num_states(const mrs_trajectory* trajectory);
MRS_API size_t mrs_trajectory_num_outputs(const mrs_trajectory* trajectory);
MRS_API size_t mrs_trajectory_nfe(const mrs_trajectory* trajectory);
/* Pointers stay valid for the trajectory's lifetime; NULL when out of range. */
MRS_API const double* mrs_trajectory_state(const mrs_trajectory* trajectory, size_t index, double* t_out);
MRS_API const double* mrs_trajectory_output(const mrs_trajectory* trajectory, size_t index, double* t_out);
MRS_API const double* mrs_trajectory_final(const mrs_trajectory* trajectory);

/* ---- diagnostics -------------------------------------------------------- */

/* Writes up to capacity entries of (step index, h, ratio); *count_out gets the
 * number of entries the report holds. rel_tol <= 0 selects 1e-12. */
MRS_API mrs_status mrs_convergence_ratio(const mrs_schedule* schedule, const mrs_trajectory* trajectory,
                                         double rel_tol, size_t capacity, size_t* step_out, double* h_out,
                                         double* ratio_out, size_t* count_out);

/* Fits a top-2 PCA basis to n points of dimension dim (row-major). */
MRS_API mrs_status mrs_pca_fit(size_t n, size_t dim, const double* points, mrs_pca** out);
MRS_API void mrs_pca_destroy(mrs_pca* pca);
/* Projects n points (row-major) to n (pc1, pc2) pairs. */
MRS_API mrs_status mrs_pca_project(const mrs_pca* pca, size_t n, const double* points, double* out_2d);
MRS_API mrs_status mrs_pca_explained_variance(const mrs_pca* pca, double* first, double* second);

MRS_API mrs_status mrs_empirical_order(size_t n, const size_t* nfe, const double* err, double* order_out);
MRS_API mrs_status mrs_rmse(size_t n, const double* a, const double* b, double* out);

#ifdef __cplusplus
}
#endif

#endif /* MRSAMPLER_MRSAMPLER_H */
