/* C interface of the lecm shared library.
 *
 * All objects are opaque handles created and destroyed through these
 * functions. Every fallible call returns a status code; lecm_last_error()
 * describes the most recent failure on the calling thread.
 */
#ifndef LECM_CAPI_H
#define LECM_CAPI_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define LECM_API __declspec(dllexport)
#else
#define LECM_API __attribute__((visibility("default")))
#endif

typedef int32_t lecm_status;

enum {
  LECM_OK = 0,
  LECM_ERR_INVALID = 1,     /* bad arguments, malformed input */
  LECM_ERR_EIGENSOLVER = 2, /* ground-state solve did not converge */
  LECM_ERR_OPTIMIZER = 3,   /* basis optimization stalled */
  LECM_ERR_SYMMETRY = 4,    /* symmetry precondition violated */
  LECM_ERR_SIZE = 5,        /* problem exceeds a configured dense limit */
  LECM_ERR_IO = 6,          /* file could not be read or written */
  LECM_ERR_INTERNAL = 7
};

enum { LECM_BOUNDARY_OPEN = 0, LECM_BOUNDARY_PERIODIC = 1 };
enum { LECM_LAYOUT_SINGLE = 0, LECM_LAYOUT_TWO_DECOUPLED = 1 };
enum { LECM_MINIMIZE = 0, LECM_MAXIMIZE = 1 };

typedef struct lecm_model lecm_model;
typedef struct lecm_state lecm_state;
typedef struct lecm_partition lecm_partition;
typedef struct lecm_bsm lecm_bsm;
typedef struct lecm_localization lecm_localization;
typedef struct lecm_report lecm_report;

LECM_API const char* lecm_version(void);
LECM_API const char* lecm_last_error(void);
LECM_API void lecm_set_threads(int32_t n);

/* ---- model ---------------------------------------------------------- */

LECM_API lecm_status lecm_model_create(int32_t n_sites, double j1, double j2, int32_t boundary,
                                       int32_t layout, lecm_model** out);
LECM_API void lecm_model_destroy(lecm_model* model);

/* ---- states ---------------------------------------------------------- */

/* Lowest eigenstate in the given magnetization sector (twice the total Sz). */
LECM_API lecm_status lecm_ground_state(const lecm_model* model, int32_t two_sz, uint64_t seed,
                                       double tol, lecm_state** out);
LECM_API lecm_status lecm_dense_ground_state(const lecm_model* model, int32_t two_sz,
                                             lecm_state** out);
/* Built-in demo states: "ghz", "w", "random". */
LECM_API lecm_status lecm_demo_state(const char* name, int32_t n_sites, uint64_t seed,
                                     lecm_state** out);
LECM_API lecm_status lecm_state_save(const lecm_state* state, const char* path);
LECM_API lecm_status lecm_state_load(const char* path, lecm_state** out);
LECM_API void lecm_state_destroy(lecm_state* state);

LECM_API lecm_status lecm_state_n_sites(const lecm_state* state, int32_t* out);
LECM_API lecm_status lecm_state_dim(const lecm_state* state, int64_t* out);
/* Solver metadata; LECM_ERR_INVALID for states that did not come from a solver. */
LECM_API lecm_status lecm_state_energy(const lecm_state* state, double* out);
LECM_API lecm_status lecm_state_residual(const lecm_state* state, double* out);
LECM_API lecm_status lecm_state_iterations(const lecm_state* state, int32_t* out);
LECM_API lecm_status lecm_state_total_spin_squared(const lecm_state* state, double* out);

/* ---- partitions ------------------------------------------------------ */

/* The environment is the complement of the two listed parts. */
LECM_API lecm_status lecm_partition_create(int32_t n_sites, const int32_t* s1, int32_t n1,
                                           const int32_t* s2, int32_t n2, lecm_partition** out);
LECM_API void lecm_partition_destroy(lecm_partition* partition);

/* Mirror-symmetric pair at distance r; LECM_ERR_INVALID when no placement exists. */
LECM_API lecm_status lecm_symmetric_pair(int32_t n_sites, int32_t r, int32_t* site_a,
                                         int32_t* site_b);

/* ---- canonical measurement ------------------------------------------- */

/* Canonical average entropy of a symmetrically placed two-site system. */
LECM_API lecm_status lecm_two_site(const lecm_state* state, int32_t site_a, int32_t site_b,
                                   double* sbar, double* lambda_s, double* lambda_t);

/* use_env_sz / use_env_reflection select the degeneracy-resolution operators. */
LECM_API lecm_status lecm_canonical(const lecm_state* state, const lecm_partition* partition,
                                    int32_t use_env_sz, int32_t use_env_reflection,
                                    lecm_localization** out);

/* ---- measurement bases ------------------------------------------------ */

LECM_API lecm_status lecm_bsm_canonical(const lecm_state* state, const lecm_partition* partition,
                                        int32_t use_env_sz, int32_t use_env_reflection,
                                        lecm_bsm** out);
/* Haar-random orthonormal basis of the environment support. */
LECM_API lecm_status lecm_bsm_random(const lecm_state* state, const lecm_partition* partition,
                                     uint64_t seed, lecm_bsm** out);
/* One random-pair rotation of the given size applied in place. */
LECM_API lecm_status lecm_bsm_perturb(lecm_bsm* bsm, double epsilon, uint64_t seed);
LECM_API lecm_status lecm_bsm_save(const lecm_bsm* bsm, const char* path);
LECM_API lecm_status lecm_bsm_load(const char* path, lecm_bsm** out);
LECM_API lecm_status lecm_bsm_dims(const lecm_bsm* bsm, int64_t* env_dim, int32_t* count);
LECM_API void lecm_bsm_destroy(lecm_bsm* bsm);

/* ---- localization ------------------------------------------------------ */

LECM_API lecm_status lecm_localize(const lecm_state* state, const lecm_partition* partition,
                                   const lecm_bsm* bsm, lecm_localization** out);
LECM_API lecm_status lecm_localization_average(const lecm_localization* loc, double* out);
LECM_API lecm_status lecm_localization_count(const lecm_localization* loc, int32_t* out);
LECM_API lecm_status lecm_localization_probability(const lecm_localization* loc, int32_t i,
                                                   double* out);
LECM_API lecm_status lecm_localization_entropy(const lecm_localization* loc, int32_t i,
                                               double* out);
LECM_API void lecm_localization_destroy(lecm_localization* loc);

/* ---- first-order audit and optimization -------------------------------- */

LECM_API lecm_status lecm_check_optimality(const lecm_state* state, const lecm_partition* partition,
                                           const lecm_bsm* bsm, double stationarity_tol,
                                           lecm_report** out);
LECM_API lecm_status lecm_report_max_residual(const lecm_report* report, double* out);
LECM_API lecm_status lecm_report_stationary(const lecm_report* report, int32_t* out);
LECM_API lecm_status lecm_report_pair_count(const lecm_report* report, int32_t* out);
LECM_API lecm_status lecm_report_pair(const lecm_report* report, int32_t index, int32_t* i,
                                      int32_t* j, double* p_i, double* p_j, double* sbar1);
LECM_API void lecm_report_destroy(lecm_report* report);

/* Returns LECM_OK with *stationary = 0 when the iteration cap was reached. */
LECM_API lecm_status lecm_optimize(const lecm_state* state, const lecm_partition* partition,
                                   const lecm_bsm* start, int32_t direction, double step_init,
                                   double stationarity_tol, int32_t max_iters, lecm_bsm** out_bsm,
                                   lecm_localization** out_loc, lecm_report** out_report,
                                   double** trajectory, int64_t* trajectory_len,
                                   int32_t* stationary);
LECM_API void lecm_buffer_destroy(double* buffer);

LECM_API lecm_status lecm_random_bsm_oracle(const lecm_state* state,
                                            const lecm_partition* partition, int64_t n_trials,
                                            uint64_t seed, double* best_max, double* best_min);

/* ---- experiment drivers (CSV-producing) -------------------------------- */

typedef struct {
  int32_t n_sites;
  double j1;
  int32_t boundary;
  int32_t layout;
  int32_t two_sz;
  uint64_t seed;
  double tol;
  int32_t allow_even_r;
  const char* cache_dir;   /* NULL disables the ground-state cache */
  const char* plot_script; /* NULL skips the gnuplot emitter */
  const char* warn_log;    /* NULL sends placement warnings to stderr */
} lecm_experiment_options;

/* Writes sweep rows (j2,R,sbar,lambda_s,lambda_t,delta_sbar) to csv_path. */
LECM_API lecm_status lecm_run_sweep(const lecm_experiment_options* options, const double* j2_values,
                                    int32_t n_j2, const int32_t* r_values, int32_t n_r,
                                    const char* csv_path, int32_t* rows_written);
/* Writes length rows (j2,r1,r2,delta1,delta2,xi) to csv_path. */
LECM_API lecm_status lecm_run_entanglement_length(const lecm_experiment_options* options,
                                                  const double* j2_values, int32_t n_j2, int32_t r1,
                                                  int32_t r2, const char* csv_path,
                                                  int32_t* rows_written);
/* Cross-chain baseline rows on two decoupled chains. */
LECM_API lecm_status lecm_run_decoupled_baseline(const lecm_experiment_options* options,
                                                 const double* j2_values, int32_t n_j2,
                                                 const int32_t* r_values, int32_t n_r,
                                                 const char* csv_path, int32_t* rows_written);
/* Ground state with cache; prints nothing. cache_hit may be NULL. */
LECM_API lecm_status lecm_cached_ground_state(const lecm_experiment_options* options, double j2,
                                              lecm_state** out, int32_t* cache_hit);
LECM_API lecm_status lecm_write_residuals_csv(const lecm_report* report, const char* path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* LECM_CAPI_H */
