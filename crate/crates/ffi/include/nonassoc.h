/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef NONASSOC_H
#define NONASSOC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  NA_STATUS_OK = 0,
  NA_STATUS_NULL_POINTER = 1,
  NA_STATUS_INVALID_UTF8 = 2,
  NA_STATUS_PARSE_ERROR = 3,
  NA_STATUS_NOT_REDUCIBLE = 4,
  NA_STATUS_ALGEBRA_ERROR = 5,
  NA_STATUS_FOCK_ERROR = 6,
  NA_STATUS_FRAME_ERROR = 7,
  NA_STATUS_DOMAIN_ERROR = 8,
  NA_STATUS_INVALID_ARGUMENT = 9,
  NA_STATUS_PANIC = 10,
} NaStatus;

typedef enum {
  NA_IDENTITY_ASSOCIATIVE = 0,
  NA_IDENTITY_FLEXIBLE = 1,
  NA_IDENTITY_ALTERNATIVE = 2,
  NA_IDENTITY_JORDAN = 3,
  NA_IDENTITY_POWER_ASSOCIATIVE = 4,
  NA_IDENTITY_LIE_ADMISSIBLE = 5,
  NA_IDENTITY_UNITARY = 6,
} NaIdentity;

/**
 * Normal-form polynomial.
 */
typedef struct NaPoly NaPoly;

/**
 * Parsed term.
 */
typedef struct NaTerm NaTerm;

/**
 * Result of [`na_fit_null_frame`]: `W = ψ₁e + ψ₂*e*`.
 */
typedef struct {
  double psi1_re;
  double psi1_im;
  double psi2_re;
  double psi2_im;
  double e_re[4];
  double e_im[4];
  double residual;
} NaSplit;

/**
 * Result of [`na_find_minima`] for the positive minimum.
 */
typedef struct {
  double phi_star;
  double v_star;
  double closed_form;
  double printed_formula;
  double rel_gap;
  double curvature;
} NaMinima;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until
 * the next failing call on the same thread; do not free.
 */
const char *na_last_error_message(void);

void na_string_free(char *s);

NaStatus na_term_parse(const char *text, NaTerm **out);

NaStatus na_term_print(const NaTerm *t, char **out);

void na_term_free(NaTerm *t);

NaStatus na_normalize(const NaTerm *t, NaPoly **out);

NaStatus na_poly_to_string(const NaPoly *p, char **out);

NaStatus na_poly_associative_limit(const NaPoly *p, NaPoly **out);

NaStatus na_poly_term_count(const NaPoly *p, size_t *out);

void na_poly_free(NaPoly *p);

/**
 * Certifies one identity. `power` is used by `PowerAssociative` only.
 * With `randomized` false the check is exhaustive over basis tuples.
 * `out_report` receives the one-line report and may be null.
 */
NaStatus na_check_identity(uint32_t level,
                           NaIdentity identity,
                           uint32_t power,
                           bool randomized,
                           uint32_t trials,
                           uint64_t seed,
                           bool *out_holds,
                           char **out_report);

/**
 * Cayley–Dickson product in floating point. `x`, `y` and `out` each hold
 * `2^level` coordinates.
 */
NaStatus na_cd_mul(uint32_t level, const double *x, const double *y, double *out);

/**
 * `a` is the 3×4 field in row-major order. Writes `Φ` (3×3) and the frame
 * (3×4), both row-major. `out_residual` may be null.
 */
NaStatus na_decompose_su2(const double *a,
                          double tol,
                          double *out_phi,
                          double *out_frame,
                          double *out_residual);

NaStatus na_fit_null_frame(const double *w_re, const double *w_im, double tol, NaSplit *out);

/**
 * Effective potential at `phi`; `phi = 0` is a domain error.
 */
NaStatus na_v_eff(double phi, double alpha, double g, double mu_bar, double *out);

NaStatus na_find_minima(double alpha, double g, double mu_bar, double tol, NaMinima *out);

/**
 * Runs the projected slave-boson checks. `out_report` may be null.
 */
NaStatus na_fock_verify(size_t sites, size_t boson_cutoff, bool *out_all_pass, char **out_report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NONASSOC_H */
