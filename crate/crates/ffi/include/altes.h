#ifndef ALTES_H
#define ALTES_H

/* Generated by cbindgen from src/lib.rs. Do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum AltesStatus {
  ALTES_STATUS_OK = 0,
  ALTES_STATUS_NULL_POINTER = 1,
  ALTES_STATUS_INVALID_PARAMETER = 2,
  ALTES_STATUS_SINGULAR_CHIRP_RATE = 3,
  ALTES_STATUS_INVALID_LENGTH = 4,
  ALTES_STATUS_LOCALIZATION = 5,
  ALTES_STATUS_DEGENERATE_SCALE = 6,
  ALTES_STATUS_EMPTY_INPUT = 7,
  ALTES_STATUS_TRANSFORM_TOO_LARGE = 8,
  ALTES_STATUS_BUFFER_TOO_SMALL = 9,
  ALTES_STATUS_IO = 10,
  ALTES_STATUS_PANIC = 11,
} AltesStatus;

// Opaque chirplet parameter set.
typedef struct AltesChirplet AltesChirplet;

// Opaque transform result, `n_scales` rows of `n_shifts` coefficients.
typedef struct AltesScalogram AltesScalogram;

// Derived quantities of a chirplet.
typedef struct AltesChirpletInfo {
  double omega0;
  double omega_c;
  double lambda;
  double kc_level;
  double kappa_c;
  double bandwidth;
  double lower_cutoff;
  double intrinsic_k;
  double energy;
  double admissibility_constant;
} AltesChirpletInfo;

// Complex sample, layout-compatible with `double[2]`.
typedef struct AltesComplex {
  double re;
  double im;
} AltesComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *altes_version(void);

// Static description of a status code.
const char *altes_status_message(enum AltesStatus status);

// Copies the last error message of this thread into `buf` (truncated, always
// NUL-terminated when `len > 0`). Returns the full message length plus one, or 0 when no
// error has been recorded.
//
// # Safety
// `buf` must be valid for `len` bytes or null with `len == 0`.
size_t altes_last_error_message(char *buf, size_t len);

// Chirplet from center frequency, upper cutoff and chirp rate at the default -40 dB level.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum AltesStatus altes_chirplet_new(double omega0,
                                    double omega_c,
                                    double lambda,
                                    struct AltesChirplet **out);

// Like [`altes_chirplet_new`] with an explicit cutoff level `kc_level` in `(0, 1)`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum AltesStatus altes_chirplet_new_with_level(double omega0,
                                               double omega_c,
                                               double lambda,
                                               double kc_level,
                                               struct AltesChirplet **out);

// Chirplet from the classic `{nu, k, c}` parameters.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum AltesStatus altes_chirplet_from_classic(double nu,
                                             double k,
                                             double c,
                                             double kc_level,
                                             struct AltesChirplet **out);

// Releases a chirplet; null is ignored.
//
// # Safety
// `chirplet` must come from this library and not be used afterwards.
void altes_chirplet_free(struct AltesChirplet *chirplet);

// # Safety
// `chirplet` must be a live handle and `info` valid for writing.
enum AltesStatus altes_chirplet_info(const struct AltesChirplet *chirplet,
                                     struct AltesChirpletInfo *info);

// Frequency response at `omega`; zero for `omega <= 0`.
//
// # Safety
// `chirplet` must be a live handle and `out` valid for writing.
enum AltesStatus altes_chirplet_response(const struct AltesChirplet *chirplet,
                                         double omega,
                                         struct AltesComplex *out);

// One-sided spectrum on `[0, pi]`: writes `n_fft / 2 + 1` bins.
//
// # Safety
// `out` must be valid for `out_len` elements.
enum AltesStatus altes_chirplet_spectrum(const struct AltesChirplet *chirplet,
                                         size_t n_fft,
                                         struct AltesComplex *out,
                                         size_t out_len);

// Analytic time series of length `n_fft`, envelope peak near sample 0 (circular).
//
// # Safety
// `out` must be valid for `out_len` elements.
enum AltesStatus altes_chirplet_time(const struct AltesChirplet *chirplet,
                                     size_t n_fft,
                                     struct AltesComplex *out,
                                     size_t out_len);

// Smallest power-of-two transform holding the chirplet's -K_c delay spread.
//
// # Safety
// `chirplet` must be a live handle and `n_fft` valid for writing.
enum AltesStatus altes_chirplet_advised_fft_size(const struct AltesChirplet *chirplet,
                                                 size_t *n_fft);

// Hyperbolic chirplet transform of a power-of-two length analytic signal over
// strictly increasing positive scales.
//
// # Safety
// `signal` and `scales` must be valid for their lengths; `out` valid for writing.
enum AltesStatus altes_hct(const struct AltesChirplet *chirplet,
                           const struct AltesComplex *signal,
                           size_t signal_len,
                           const double *scales,
                           size_t n_scales,
                           struct AltesScalogram **out);

// Morlet continuous wavelet transform with center frequency `center` in `(0, pi)`.
//
// # Safety
// `signal` and `scales` must be valid for their lengths; `out` valid for writing.
enum AltesStatus altes_morlet_cwt(double center,
                                  const struct AltesComplex *signal,
                                  size_t signal_len,
                                  const double *scales,
                                  size_t n_scales,
                                  struct AltesScalogram **out);

// Releases a scalogram; null is ignored.
//
// # Safety
// `scalogram` must come from this library and not be used afterwards.
void altes_scalogram_free(struct AltesScalogram *scalogram);

// # Safety
// `scalogram` must be a live handle; `n_scales` and `n_shifts` valid for writing.
enum AltesStatus altes_scalogram_dims(const struct AltesScalogram *scalogram,
                                      size_t *n_scales,
                                      size_t *n_shifts);

// Coefficients in row-major order, one row per scale.
//
// # Safety
// `out` must be valid for `out_len` elements.
enum AltesStatus altes_scalogram_coefficients(const struct AltesScalogram *scalogram,
                                              struct AltesComplex *out,
                                              size_t out_len);

// Coefficient magnitudes in row-major order.
//
// # Safety
// `out` must be valid for `out_len` elements.
enum AltesStatus altes_scalogram_magnitudes(const struct AltesScalogram *scalogram,
                                            double *out,
                                            size_t out_len);

// The scales of each row, ascending.
//
// # Safety
// `out` must be valid for `out_len` elements.
enum AltesStatus altes_scalogram_scales(const struct AltesScalogram *scalogram,
                                        double *out,
                                        size_t out_len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ALTES_H */
