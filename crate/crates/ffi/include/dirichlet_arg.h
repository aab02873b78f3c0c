#ifndef DIRICHLET_ARG_H
#define DIRICHLET_ARG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a call.
 */
typedef enum DaStatus {
  DA_STATUS_OK = 0,
  DA_STATUS_NULL_POINTER = 1,
  DA_STATUS_CONSTRAINT = 2,
  DA_STATUS_DOMAIN = 3,
  DA_STATUS_CAPACITY = 4,
  DA_STATUS_DIVERGENCE = 5,
  DA_STATUS_POLE = 6,
  DA_STATUS_UNSUPPORTED = 7,
  DA_STATUS_NEAR_SINGULAR = 8,
  DA_STATUS_NUMERIC = 9,
  DA_STATUS_PANIC = 10,
} DaStatus;

/**
 * A character family modulo a prime.
 */
typedef struct DaFamily DaFamily;

/**
 * Critical zeros of one L-function in a window.
 */
typedef struct DaZeroList DaZeroList;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until the next call.
 */
const char *da_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *da_version(void);

/**
 * Builds the characters modulo the prime `q` into `*out_family`.
 *
 * # Safety
 * `out_family` must be valid for writes.
 */
enum DaStatus da_family_new(uint64_t q, struct DaFamily **out_family);

/**
 * Releases a family. NULL is ignored.
 *
 * # Safety
 * `f` must come from `da_family_new` and not be used afterwards.
 */
void da_family_free(struct DaFamily *f);

/**
 * Number of characters (q − 1), or 0 for NULL.
 *
 * # Safety
 * `f` must be NULL or a live family.
 */
size_t da_family_len(const struct DaFamily *f);

/**
 * Primitive root used to index the characters, or 0 for NULL.
 *
 * # Safety
 * `f` must be NULL or a live family.
 */
uint64_t da_family_generator(const struct DaFamily *f);

/**
 * χ_j(n) as real and imaginary parts.
 *
 * # Safety
 * `f` must be a live family; `re` and `im` must be valid for writes.
 */
enum DaStatus da_character_value(const struct DaFamily *f,
                                 size_t index,
                                 uint64_t n,
                                 double *re,
                                 double *im);

/**
 * L(σ + it, χ_j).
 *
 * # Safety
 * `f` must be a live family; `re` and `im` must be valid for writes.
 */
enum DaStatus da_l_value(const struct DaFamily *f,
                         size_t index,
                         double sigma,
                         double t,
                         double *re,
                         double *im);

/**
 * S(t, χ_j) for a non-principal character.
 *
 * # Safety
 * `f` must be a live family; `value` must be valid for writes.
 */
enum DaStatus da_s_of_t(const struct DaFamily *f, size_t index, double t, double *value);

/**
 * Critical zeros of L(s, χ_j) with t_lo ≤ γ ≤ t_hi.
 *
 * # Safety
 * `f` must be a live family; `out_zeros` must be valid for writes.
 */
enum DaStatus da_zeros_new(const struct DaFamily *f,
                           size_t index,
                           double t_lo,
                           double t_hi,
                           struct DaZeroList **out_zeros);

/**
 * Releases a zero list. NULL is ignored.
 *
 * # Safety
 * `z` must come from `da_zeros_new` and not be used afterwards.
 */
void da_zeros_free(struct DaZeroList *z);

/**
 * Number of ordinates, or 0 for NULL.
 *
 * # Safety
 * `z` must be NULL or a live zero list.
 */
size_t da_zeros_len(const struct DaZeroList *z);

/**
 * Ascending ordinates; `da_zeros_len` entries, owned by the list.
 *
 * # Safety
 * `z` must be NULL or a live zero list.
 */
const double *da_zeros_ordinates(const struct DaZeroList *z);

/**
 * True when the contour count agrees with the located zeros.
 *
 * # Safety
 * `z` must be NULL or a live zero list.
 */
bool da_zeros_validated(const struct DaZeroList *z);

/**
 * √D(η, δ, κ, k, ε).
 *
 * # Safety
 * `value` must be valid for writes.
 */
enum DaStatus da_sqrt_d(double eta,
                        double delta,
                        double kappa,
                        uint32_t k,
                        double eps,
                        double *value);

/**
 * (2C₀ + (√2/π)·√(∫₀^{3β/50} sin²(2πy)/y dy))².
 *
 * # Safety
 * `value` must be valid for writes.
 */
enum DaStatus da_mean_square_bound(double beta, double *value);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DIRICHLET_ARG_H */
