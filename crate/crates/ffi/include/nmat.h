#ifndef NMAT_H
#define NMAT_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum NmatStatus {
  NMAT_STATUS_OK = 0,
  NMAT_STATUS_NULL_POINTER = 1,
  NMAT_STATUS_INVALID_ARGUMENT = 2,
  /**
   * θ lost positivity: the droplet is no longer simply connected.
   */
  NMAT_STATUS_BREAKDOWN = 3,
  NMAT_STATUS_NO_CONVERGENCE = 4,
  /**
   * The output buffer was too short; the required length was written.
   */
  NMAT_STATUS_BUFFER_TOO_SMALL = 5,
  NMAT_STATUS_INTERNAL = 6,
} NmatStatus;

typedef struct NmatBoundary NmatBoundary;

typedef struct NmatChain NmatChain;

typedef struct NmatPotential NmatPotential;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread; empty if none. Valid until
 * the next failing call on the same thread.
 */
const char *nmat_last_error(void);

/**
 * `W(z) = C|z|^{2b} − 2Re P(z)` with `P(z) = Σ_{k=1}^{degree} p_k z^k`,
 * `p_k = poly_re[k−1] + i·poly_im[k−1]`. A non-positive `domain_radius`
 * selects the default.
 *
 * # Safety
 * `out` must be writable; `poly_re`/`poly_im` must hold `degree` doubles.
 */
enum NmatStatus nmat_potential_new_power(double c,
                                         double b,
                                         const double *poly_re,
                                         const double *poly_im,
                                         size_t degree,
                                         double domain_radius,
                                         struct NmatPotential **out);

/**
 * Generalized profile from `m` block parameters `alphas`.
 *
 * # Safety
 * As [`nmat_potential_new_power`]; `alphas` must hold `m` doubles.
 */
enum NmatStatus nmat_potential_new_generalized(const double *alphas,
                                               size_t m,
                                               double coupling,
                                               const double *poly_re,
                                               const double *poly_im,
                                               size_t degree,
                                               double domain_radius,
                                               struct NmatPotential **out);

/**
 * # Safety
 * `pot` must come from a `nmat_potential_new_*` call and not be freed twice.
 */
void nmat_potential_free(struct NmatPotential *pot);

/**
 * Solves for the droplet. `grid_size = 0` and `tol <= 0` select defaults.
 *
 * # Safety
 * `pot` must be a live handle and `out` writable.
 */
enum NmatStatus nmat_boundary_solve(const struct NmatPotential *pot,
                                    size_t grid_size,
                                    double tol,
                                    struct NmatBoundary **out);

/**
 * Map normalization `a`; NaN for a null handle.
 *
 * # Safety
 * `b` must be null or a live handle.
 */
double nmat_boundary_a(const struct NmatBoundary *b);

/**
 * # Safety
 * `b` must be null or a live handle.
 */
double nmat_boundary_conformal_radius(const struct NmatBoundary *b);

/**
 * Copies the counterclockwise boundary polyline. `*len` receives the
 * number of points even when `capacity` is too small.
 *
 * # Safety
 * `b` must be a live handle; `xs`, `ys` must hold `capacity` doubles.
 */
enum NmatStatus nmat_boundary_curve(const struct NmatBoundary *b,
                                    double *xs,
                                    double *ys,
                                    size_t capacity,
                                    size_t *len);

/**
 * # Safety
 * `b` must come from [`nmat_boundary_solve`] and not be freed twice.
 */
void nmat_boundary_free(struct NmatBoundary *b);

/**
 * Explicit droplet for `Φ = C s^b`, `P = K z`.
 *
 * # Safety
 * `a` and `beta` must be writable.
 */
enum NmatStatus nmat_closed_form_power(double c, double b, double k, double *a, double *beta);

/**
 * Metropolis chain of `n` particles. `generalized != 0` adds the
 * generalized model's Jacobian factor. The proposal width adapts during
 * the first `burn_in` sweeps.
 *
 * # Safety
 * `pot` must be a live handle and `out` writable.
 */
enum NmatStatus nmat_chain_new(const struct NmatPotential *pot,
                               size_t n,
                               uint64_t seed,
                               uint64_t chain,
                               uint64_t burn_in,
                               int32_t generalized,
                               struct NmatChain **out);

/**
 * Runs `count` sweeps.
 *
 * # Safety
 * `ch` must be a live handle.
 */
enum NmatStatus nmat_chain_sweep(struct NmatChain *ch, uint64_t count);

/**
 * Copies the current eigenvalues; `*len` receives `n`.
 *
 * # Safety
 * `ch` must be a live handle; `xs`, `ys` must hold `capacity` doubles.
 */
enum NmatStatus nmat_chain_positions(const struct NmatChain *ch,
                                     double *xs,
                                     double *ys,
                                     size_t capacity,
                                     size_t *len);

/**
 * Acceptance rate since creation; NaN for a null handle.
 *
 * # Safety
 * `ch` must be null or a live handle.
 */
double nmat_chain_acceptance(const struct NmatChain *ch);

/**
 * # Safety
 * `ch` must come from [`nmat_chain_new`] and not be freed twice.
 */
void nmat_chain_free(struct NmatChain *ch);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NMAT_H */
