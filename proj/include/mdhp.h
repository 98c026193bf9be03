/* mdhp: hybrid RF/baseband precoder and combiner design for massive MIMO
 * via constant-modulus matrix decomposition.
 *
 * C interface of the shared library. All types are opaque handles created
 * and destroyed through these functions; every fallible call returns an
 * mdhp_status and leaves a human-readable message in mdhp_last_error()
 * (thread local) on failure.
 */
#ifndef MDHP_H
#define MDHP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MDHP_API __declspec(dllexport)
#else
#define MDHP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mdhp_status {
  MDHP_OK = 0,
  MDHP_ERR_INVALID_ARGUMENT,
  MDHP_ERR_DIMENSION,
  MDHP_ERR_RANK_DEFICIENT,
  MDHP_ERR_NOT_HERMITIAN,
  MDHP_ERR_NOT_POSITIVE_DEFINITE,
  MDHP_ERR_ZERO_TARGET,
  MDHP_ERR_SINGULAR_NOISE,
  MDHP_ERR_SVD_FAILURE,
  MDHP_ERR_CONFIG,
  MDHP_ERR_IO,
  MDHP_ERR_TRIAL_FAILURES,
  MDHP_ERR_INTERNAL
} mdhp_status;

MDHP_API const char* mdhp_status_name(mdhp_status status);

/* Message of the most recent failing call on this thread ("" if none). */
MDHP_API const char* mdhp_last_error(void);

MDHP_API const char* mdhp_version(void);

/* --- dense complex matrices (column-major storage) --------------------- */

typedef struct mdhp_matrix mdhp_matrix;

/* re/im point at rows*cols doubles in column-major order; im may be NULL
 * for a real matrix. */
MDHP_API mdhp_status mdhp_matrix_create(int rows, int cols, const double* re, const double* im,
                                        mdhp_matrix** out);
MDHP_API void mdhp_matrix_destroy(mdhp_matrix* m);
MDHP_API int mdhp_matrix_rows(const mdhp_matrix* m);
MDHP_API int mdhp_matrix_cols(const mdhp_matrix* m);
/* Copies entries out in column-major order; either pointer may be NULL. */
MDHP_API mdhp_status mdhp_matrix_copy_out(const mdhp_matrix* m, double* re, double* im);

/* i.i.d. CN(0,1) channel, deterministic in the seed. */
MDHP_API mdhp_status mdhp_gen_rayleigh(int nr, int nt, uint64_t seed, mdhp_matrix** out);

/* --- constant-modulus matrix decomposition ----------------------------- */

typedef struct mdhp_decomposition_settings {
  double convergence_tol;      /* stop when |eps_k - eps_{k-1}| <= tol */
  double initial_increment;    /* first phase-increment bound */
  double growth_factor;
  double shrink_factor;
  double increment_min;
  double increment_max;
  double proximity_multiplier; /* "near convergence" = |d eps| <= mult * tol */
  int max_iterations;
  int adaptive_threshold;      /* 0: constant bound, 1: adaptive schedule */
  int normalize_output;        /* scale so ||rf * baseband||_F^2 = columns */
} mdhp_decomposition_settings;

MDHP_API void mdhp_decomposition_settings_init(mdhp_decomposition_settings* s);

typedef struct mdhp_processor mdhp_processor; /* RF phase factor + baseband factor */
typedef struct mdhp_trace mdhp_trace;

/* Factors target (n x ns) into an n x rf_columns constant-modulus RF matrix
 * and an rf_columns x ns baseband matrix. modulus is the fixed RF amplitude
 * (1/sqrt(n) for a precoder). out_trace may be NULL. */
MDHP_API mdhp_status mdhp_decompose(const mdhp_matrix* target, int rf_columns, double modulus,
                                    const mdhp_decomposition_settings* settings, uint64_t seed,
                                    mdhp_processor** out_proc, mdhp_trace** out_trace);

MDHP_API void mdhp_processor_destroy(mdhp_processor* p);
MDHP_API int mdhp_processor_rf_rows(const mdhp_processor* p);
MDHP_API int mdhp_processor_rf_cols(const mdhp_processor* p);
MDHP_API double mdhp_processor_modulus(const mdhp_processor* p);
/* Copies the RF phases (radians in [0, 2pi)) in column-major order. */
MDHP_API mdhp_status mdhp_processor_copy_phases(const mdhp_processor* p, double* phases);
MDHP_API mdhp_status mdhp_processor_baseband(const mdhp_processor* p, mdhp_matrix** out);
/* Realized product rf * baseband. */
MDHP_API mdhp_status mdhp_processor_product(const mdhp_processor* p, mdhp_matrix** out);

MDHP_API void mdhp_trace_destroy(mdhp_trace* t);
MDHP_API int mdhp_trace_iterations(const mdhp_trace* t);
MDHP_API int mdhp_trace_converged(const mdhp_trace* t);
MDHP_API double mdhp_trace_final_error(const mdhp_trace* t);
/* error history has iterations+1 entries (eps_0 first), threshold history
 * has iterations entries. Copies up to capacity and returns the count. */
MDHP_API int mdhp_trace_copy_errors(const mdhp_trace* t, double* out, int capacity);
MDHP_API int mdhp_trace_copy_thresholds(const mdhp_trace* t, double* out, int capacity);

/* --- experiments -------------------------------------------------------- */

typedef struct mdhp_config mdhp_config;
typedef struct mdhp_records mdhp_records;

/* Default SNR-sweep scenario (256x64 Rayleigh, 8 streams, 12 RF chains,
 * unconstrained / hybrid / 2-bit quantized hybrid schemes). */
MDHP_API mdhp_status mdhp_config_create(mdhp_config** out);
/* Default convergence scenario (256x64 Rayleigh, 4 streams, 6 RF chains). */
MDHP_API mdhp_status mdhp_config_create_convergence(mdhp_config** out);
MDHP_API mdhp_status mdhp_config_load(const char* path, mdhp_config** out);
MDHP_API mdhp_status mdhp_config_save(const mdhp_config* cfg, const char* path);
MDHP_API mdhp_status mdhp_config_set_seed(mdhp_config* cfg, uint64_t seed);
MDHP_API void mdhp_config_destroy(mdhp_config* cfg);

/* Monte-Carlo SNR sweep; threads <= 0 picks the hardware default. Output is
 * byte-deterministic in the seed regardless of the thread count. */
MDHP_API mdhp_status mdhp_run_sweep(const mdhp_config* cfg, int threads, mdhp_records** out);
MDHP_API int mdhp_records_count(const mdhp_records* r);
MDHP_API mdhp_status mdhp_records_get(const mdhp_records* r, int index, char* scheme_buf,
                                      size_t scheme_capacity, double* snr_db, double* mean_rate,
                                      double* rate_stderr, double* eps_precoder,
                                      double* eps_combiner, int* trials);
MDHP_API mdhp_status mdhp_records_write_csv(const mdhp_records* r, const char* path);
MDHP_API void mdhp_records_destroy(mdhp_records* r);

/* Runs both threshold schedules on one channel and writes
 * convergence_{constant,adaptive}.csv and phase_trace_{constant,adaptive}.csv
 * into out_dir. */
MDHP_API mdhp_status mdhp_run_convergence(const mdhp_config* cfg, const char* out_dir);

/* One channel at one SNR: writes the hybrid factors and a rate summary. */
MDHP_API mdhp_status mdhp_run_single(const mdhp_config* cfg, double snr_db, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* MDHP_H */
