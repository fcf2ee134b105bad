#ifndef PERIODIC_SUSY_H
#define PERIODIC_SUSY_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PsusyStatus {
  PSUSY_STATUS_OK = 0,
  PSUSY_STATUS_NULL_POINTER = 1,
  PSUSY_STATUS_INVALID_ARGUMENT = 2,
  PSUSY_STATUS_UNSUPPORTED_PERIOD = 3,
  PSUSY_STATUS_SINGULAR_POINT = 4,
  PSUSY_STATUS_BUFFER_TOO_SMALL = 5,
  PSUSY_STATUS_INTERNAL = 6,
} PsusyStatus;

/**
 * A validated hierarchy: gaps, ground energy and center.
 */
typedef struct PsusyHierarchy PsusyHierarchy;

/**
 * An exact eigenstate together with the hierarchy it belongs to.
 */
typedef struct PsusyState PsusyState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the calling thread's last error message into `buf`.
 *
 * # Safety
 * `buf` must be null or point to `capacity` writable bytes; `needed` must
 * be null or writable.
 */
enum PsusyStatus psusy_last_error_message(char *buf, size_t capacity, size_t *needed);

/**
 * Library version as a static NUL-terminated string.
 */
const char *psusy_version(void);

/**
 * Creates a hierarchy from comma-separated rational gaps such as
 * `"1,5/2"`. `e0` and `u0` may be null for zero.
 *
 * # Safety
 * String arguments must be null or NUL-terminated; `out` must be writable.
 */
enum PsusyStatus psusy_hierarchy_new(const char *gaps,
                                     const char *e0,
                                     const char *u0,
                                     struct PsusyHierarchy **out);

/**
 * Creates a hierarchy from `count` double gaps, each converted exactly.
 *
 * # Safety
 * `gaps` must point to `count` doubles; `out` must be writable.
 */
enum PsusyStatus psusy_hierarchy_new_f64(const double *gaps,
                                         size_t count,
                                         double e0,
                                         double u0,
                                         struct PsusyHierarchy **out);

/**
 * # Safety
 * `h` must be null or a handle from `psusy_hierarchy_new*` not yet freed.
 */
void psusy_hierarchy_free(struct PsusyHierarchy *h);

/**
 * # Safety
 * `h` must be a live hierarchy handle; `out` must be writable.
 */
enum PsusyStatus psusy_hierarchy_period(const struct PsusyHierarchy *h, size_t *out);

/**
 * Asymmetry `α = (Δ₂ - Δ₁)/(2(Δ₁ + Δ₂))`; zero for one gap.
 *
 * # Safety
 * `h` must be a live hierarchy handle; `out` must be writable.
 */
enum PsusyStatus psusy_hierarchy_alpha(const struct PsusyHierarchy *h, double *out);

/**
 * `α` as exact `"p/q"` text.
 *
 * # Safety
 * `h` must be a live hierarchy handle; see the module notes for buffers.
 */
enum PsusyStatus psusy_hierarchy_alpha_text(const struct PsusyHierarchy *h,
                                            char *buf,
                                            size_t capacity,
                                            size_t *needed);

/**
 * Normalization constant `N₀` shared by all states.
 *
 * # Safety
 * `h` must be a live hierarchy handle; `out` must be writable.
 */
enum PsusyStatus psusy_hierarchy_global_norm(const struct PsusyHierarchy *h, double *out);

/**
 * `E_{λ,n}`, the `n`-th energy of the `λ`-th Hamiltonian (`λ ≥ 1`).
 *
 * # Safety
 * `h` must be a live hierarchy handle; `out` must be writable.
 */
enum PsusyStatus psusy_energy(const struct PsusyHierarchy *h, size_t level, size_t n, double *out);

/**
 * `E_{λ,n}` as exact `"p/q"` text.
 *
 * # Safety
 * `h` must be a live hierarchy handle; see the module notes for buffers.
 */
enum PsusyStatus psusy_energy_text(const struct PsusyHierarchy *h,
                                   size_t level,
                                   size_t n,
                                   char *buf,
                                   size_t capacity,
                                   size_t *needed);

/**
 * Builds `ψ_{λ,n}` exactly. Only one- and two-gap hierarchies have closed
 * forms.
 *
 * # Safety
 * `h` must be a live hierarchy handle; `out` must be writable.
 */
enum PsusyStatus psusy_eigenstate_new(const struct PsusyHierarchy *h,
                                      size_t level,
                                      size_t n,
                                      struct PsusyState **out);

/**
 * # Safety
 * `s` must be null or a handle from `psusy_eigenstate_new` not yet freed.
 */
void psusy_eigenstate_free(struct PsusyState *s);

/**
 * Normalized `ψ(u)`. Returns [`PsusyStatus::SingularPoint`] at a
 * divergent center.
 *
 * # Safety
 * `s` must be a live state handle; `out` must be writable.
 */
enum PsusyStatus psusy_eigenstate_eval(const struct PsusyState *s, double u, double *out);

/**
 * Evaluates `ψ` at `count` points.
 *
 * # Safety
 * `s` must be a live state handle; `u` and `out` must each hold `count`
 * doubles.
 */
enum PsusyStatus psusy_eigenstate_eval_many(const struct PsusyState *s,
                                            const double *u,
                                            size_t count,
                                            double *out);

/**
 * The exponent `σ` of the prefactor `v^σ` (zero for Gaussian-form states).
 *
 * # Safety
 * `s` must be a live state handle; `out` must be writable.
 */
enum PsusyStatus psusy_eigenstate_sigma(const struct PsusyState *s, double *out);

/**
 * Squared amplitude of the state relative to `N₀²`.
 *
 * # Safety
 * `s` must be a live state handle; `out` must be writable.
 */
enum PsusyStatus psusy_eigenstate_norm2(const struct PsusyState *s, double *out);

/**
 * Coefficients of the polynomial factor, constant term first, as doubles.
 * `count` receives the number of coefficients.
 *
 * # Safety
 * `s` must be a live state handle; `buf` must be null or hold `capacity`
 * doubles; `count` must be null or writable.
 */
enum PsusyStatus psusy_eigenstate_coefficients(const struct PsusyState *s,
                                               double *buf,
                                               size_t capacity,
                                               size_t *count);

/**
 * The hierarchy a state belongs to, as a new handle the caller must free.
 *
 * # Safety
 * `s` must be a live state handle; `out` must be writable.
 */
enum PsusyStatus psusy_eigenstate_hierarchy(const struct PsusyState *s,
                                            struct PsusyHierarchy **out);

/**
 * Coefficients of `L^{(γ)}_p` as doubles, constant term first. `gamma` is
 * rational text such as `"-1/4"`.
 *
 * # Safety
 * `gamma` must be NUL-terminated; `buf` must be null or hold `capacity`
 * doubles; `count` must be null or writable.
 */
enum PsusyStatus psusy_laguerre_coefficients(const char *gamma,
                                             size_t p,
                                             double *buf,
                                             size_t capacity,
                                             size_t *count);

/**
 * Coefficients of `L^{(γ)}_p` as space-separated `"p/q"` text.
 *
 * # Safety
 * `gamma` must be NUL-terminated; see the module notes for buffers.
 */
enum PsusyStatus psusy_laguerre_coefficients_text(const char *gamma,
                                                  size_t p,
                                                  char *buf,
                                                  size_t capacity,
                                                  size_t *needed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PERIODIC_SUSY_H */
