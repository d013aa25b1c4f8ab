#ifndef SAFT_H
#define SAFT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdint.h>
#include <stddef.h>

typedef enum SaftStatus {
  SAFT_STATUS_OK = 0,
  SAFT_STATUS_NULL_POINTER = 1,
  SAFT_STATUS_INVALID_ARGUMENT = 2,
  SAFT_STATUS_DETERMINANT_VIOLATION = 3,
  SAFT_STATUS_ZERO_B = 4,
  SAFT_STATUS_UNKNOWN_PRESET = 5,
  SAFT_STATUS_COMPLEX_PARAMETER_UNSUPPORTED = 6,
  SAFT_STATUS_GRID_MISMATCH = 7,
  SAFT_STATUS_EMPTY_GRID = 8,
  SAFT_STATUS_DIVISION_BY_ZERO_NORM = 9,
  SAFT_STATUS_DEGENERATE_GENERATOR = 10,
  SAFT_STATUS_NEGATIVE_B = 11,
  SAFT_STATUS_GRID_TOO_NARROW = 12,
  SAFT_STATUS_NON_INVERTIBLE_SYMBOL = 13,
  SAFT_STATUS_DELAY_OUT_OF_RANGE = 14,
  SAFT_STATUS_ZERO_REFERENCE = 15,
  SAFT_STATUS_IO = 16,
  SAFT_STATUS_BUFFER_TOO_SMALL = 17,
  SAFT_STATUS_PANIC = 99,
} SaftStatus;

/**
 * Opaque validated parameter set.
 */
typedef struct SaftParamsHandle SaftParamsHandle;

/**
 * Opaque sampled time signal.
 */
typedef struct SaftSignal SaftSignal;

/**
 * Opaque sampled spectrum.
 */
typedef struct SaftSpectrum SaftSpectrum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, static storage.
 */
const char *saft_version(void);

/**
 * Message of the last failed call on this thread, or null. Valid until
 * the next call into the library from the same thread.
 */
const char *saft_last_error(void);

enum SaftStatus saft_params_new(double a,
                                double b,
                                double c,
                                double d,
                                double p,
                                double q,
                                double tol,
                                struct SaftParamsHandle **out_params);

/**
 * Named preset (`ft`, `frft`, `lct`, `experiment`, ...) with `nargs` reals.
 */
enum SaftStatus saft_params_preset(const char *name,
                                   const double *args,
                                   uintptr_t nargs,
                                   struct SaftParamsHandle **out_params);

enum SaftStatus saft_params_inverse(const struct SaftParamsHandle *params,
                                    struct SaftParamsHandle **out_params);

/**
 * Copies `(a, b, c, d, p, q)` into `out6`.
 */
enum SaftStatus saft_params_get(const struct SaftParamsHandle *params, double *out6);

/**
 * `Omega = 2(bq - dp)`, `Delta = 2 pi b`, chirp rate `a / 2b`.
 */
enum SaftStatus saft_params_derived(const struct SaftParamsHandle *params,
                                    double *omega_cap,
                                    double *delta,
                                    double *chirp_rate);

void saft_params_free(struct SaftParamsHandle *params);

enum SaftStatus saft_kernel(const struct SaftParamsHandle *params,
                            double t,
                            double omega,
                            double *out_re,
                            double *out_im);

/**
 * Signal on `t0 + i dt`, `i < n`. `im` may be null for real input.
 */
enum SaftStatus saft_signal_new(double t0,
                                double dt,
                                uintptr_t n,
                                const double *re,
                                const double *im,
                                struct SaftSignal **out_signal);

uintptr_t saft_signal_len(const struct SaftSignal *signal);

/**
 * Copies the samples into caller buffers of capacity `cap`.
 */
enum SaftStatus saft_signal_values(const struct SaftSignal *signal,
                                   double *re,
                                   double *im,
                                   uintptr_t cap);

void saft_signal_free(struct SaftSignal *signal);

uintptr_t saft_spectrum_len(const struct SaftSpectrum *spectrum);

enum SaftStatus saft_spectrum_values(const struct SaftSpectrum *spectrum,
                                     double *re,
                                     double *im,
                                     uintptr_t cap);

void saft_spectrum_free(struct SaftSpectrum *spectrum);

/**
 * Forward transform on `w0 + i dw`, `i < nw`.
 */
enum SaftStatus saft_forward(const struct SaftParamsHandle *params,
                             const struct SaftSignal *signal,
                             double w0,
                             double dw,
                             uintptr_t nw,
                             struct SaftSpectrum **out_spectrum);

/**
 * Inverse transform on `t0 + i dt`, `i < n`.
 */
enum SaftStatus saft_inverse(const struct SaftParamsHandle *params,
                             const struct SaftSpectrum *spectrum,
                             double t0,
                             double dt,
                             uintptr_t n,
                             struct SaftSignal **out_signal);

/**
 * Transform-domain convolution; both signals need the same step.
 */
enum SaftStatus saft_convolve(const struct SaftParamsHandle *params,
                              const struct SaftSignal *f,
                              const struct SaftSignal *g,
                              struct SaftSignal **out_signal);

/**
 * Transform of the sequence `seq[i]` at index `offset + i`, at one frequency.
 */
enum SaftStatus saft_dtsaft(const struct SaftParamsHandle *params,
                            int64_t offset,
                            const double *re,
                            const double *im,
                            uintptr_t n,
                            double omega,
                            double *out_re,
                            double *out_im);

/**
 * Delays `n` samples taken at `(offset + i) T` by `tau` with the named
 * generator (`power-cosine`, `sinc`, `sinc:N`, `sinc:full`). Writes `n`
 * values.
 */
enum SaftStatus saft_fdf(const struct SaftParamsHandle *params,
                         int64_t offset,
                         const double *re,
                         const double *im,
                         uintptr_t n,
                         const char *generator,
                         double tau,
                         double spacing,
                         double *out_re,
                         double *out_im);

/**
 * PSNR in dB of `est` against `reference` (`+inf` when identical).
 */
enum SaftStatus saft_psnr(const double *ref_re,
                          const double *ref_im,
                          const double *est_re,
                          const double *est_im,
                          uintptr_t n,
                          double *out_db);

/**
 * Default delay study. Writes five PSNR values (delays 0.1 T .. 0.5 T)
 * per generator.
 */
enum SaftStatus saft_experiment_default(double *out_power_cosine, double *out_sinc);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SAFT_H */
