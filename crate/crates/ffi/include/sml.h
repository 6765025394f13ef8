#ifndef SML_H
#define SML_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. Zero is success.
 */
typedef enum SmlStatus {
  SML_STATUS_OK = 0,
  SML_STATUS_POLE = 1,
  SML_STATUS_DOMAIN = 2,
  SML_STATUS_NON_CONVERGENCE = 3,
  SML_STATUS_INVALID_INPUT = 4,
  SML_STATUS_MISSING_PARAMETER = 5,
  SML_STATUS_FIT_REJECTED = 6,
  SML_STATUS_IO = 7,
  SML_STATUS_NULL_POINTER = 8,
  SML_STATUS_PANIC = 9,
} SmlStatus;

typedef enum SmlVerdict {
  SML_VERDICT_SUFFICIENT_KNOWN = 0,
  SML_VERDICT_NECESSARY_VIOLATED = 1,
  SML_VERDICT_OPEN = 2,
} SmlVerdict;

typedef enum SmlQuantity {
  SML_QUANTITY_TESTFN_LP_NORM = 0,
  SML_QUANTITY_MEAN_AT_ORIGIN = 1,
  SML_QUANTITY_MEAN_TUNED_FAR = 2,
  SML_QUANTITY_MEAN_LP_NEAR_ORIGIN = 3,
} SmlQuantity;

/**
 * Opaque handle holding a completed log-log fit.
 */
typedef struct SmlFit SmlFit;

/**
 * Opaque handle: dimension, α and the quadrature settings.
 */
typedef struct SmlMeans SmlMeans;

typedef struct SmlComplex {
  double re;
  double im;
} SmlComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len - 1` bytes). Returns the full message length in bytes.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t sml_last_error_message(char *buf, size_t len);

/**
 * J_β(r) for complex order β and r ≥ 0.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SmlStatus sml_bessel_j(double order_re, double order_im, double r, struct SmlComplex *out);

/**
 * Fourier transform ϑ(s) of the surface measure on the unit sphere in R^n.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SmlStatus sml_theta(uint32_t n, double s, double *out);

/**
 * Creates a handle for dimension `n` and order α. Uses the default
 * quadrature settings unless `sweep` is nonzero.
 *
 * # Safety
 * `out` must be valid for writes. Release the handle with [`sml_means_free`].
 */
enum SmlStatus sml_means_new(uint32_t n,
                             double alpha_re,
                             double alpha_im,
                             int sweep,
                             struct SmlMeans **out);

/**
 * # Safety
 * `handle` must be null or come from [`sml_means_new`] and not be freed twice.
 */
void sml_means_free(struct SmlMeans *handle);

/**
 * The radial multiplier m^α(s).
 *
 * # Safety
 * `handle` from [`sml_means_new`]; `out` valid for writes.
 */
enum SmlStatus sml_multiplier(const struct SmlMeans *handle, double s, struct SmlComplex *out);

/**
 * The test function f_λ at distance `radius` from the origin.
 *
 * # Safety
 * `handle` from [`sml_means_new`]; `out` valid for writes.
 */
enum SmlStatus sml_testfn(const struct SmlMeans *handle,
                          double lambda,
                          double radius,
                          struct SmlComplex *out);

/**
 * The mean A_t^α f_λ at distance `radius` from the origin.
 *
 * # Safety
 * `handle` from [`sml_means_new`]; `out` valid for writes.
 */
enum SmlStatus sml_mean(const struct SmlMeans *handle,
                        double lambda,
                        double t,
                        double radius,
                        struct SmlComplex *out);

/**
 * Classifies the point (p, Re α) in dimension `n`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SmlStatus sml_classify(uint32_t n, double p, double re_alpha, enum SmlVerdict *out);

/**
 * Measures `quantity` (an `SmlQuantity` value) at each λ in `lambdas` and
 * fits a power law.
 * `p` is ignored for quantities that do not take one; pass NaN to omit it.
 *
 * # Safety
 * `handle` from [`sml_means_new`]; `lambdas` valid for `len` reads;
 * `out` valid for writes. Release the fit with [`sml_fit_free`].
 */
enum SmlStatus sml_fit_run(const struct SmlMeans *handle,
                           uint32_t quantity,
                           double p,
                           const double *lambdas,
                           size_t len,
                           struct SmlFit **out);

/**
 * # Safety
 * `fit` must be null or come from [`sml_fit_run`] and not be freed twice.
 */
void sml_fit_free(struct SmlFit *fit);

/**
 * Fitted exponent; NaN for a null handle.
 *
 * # Safety
 * `fit` must be null or come from [`sml_fit_run`].
 */
double sml_fit_slope(const struct SmlFit *fit);

/**
 * Exponent predicted by the analysis; NaN for a null handle.
 *
 * # Safety
 * `fit` must be null or come from [`sml_fit_run`].
 */
double sml_fit_predicted(const struct SmlFit *fit);

/**
 * # Safety
 * `fit` must be null or come from [`sml_fit_run`].
 */
double sml_fit_r_squared(const struct SmlFit *fit);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SML_H */
