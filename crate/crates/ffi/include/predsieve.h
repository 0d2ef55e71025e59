/* Copyright 2026 The predsieve Authors
 * SPDX-License-Identifier: Apache-2.0 */

#ifndef PREDSIEVE_H
#define PREDSIEVE_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every entry point.
 */
typedef enum PsStatus {
  PS_STATUS_OK = 0,
  PS_STATUS_NULL_POINTER = 1,
  PS_STATUS_INVALID_ARGUMENT = 2,
  /**
   * A numerical precondition failed (step size, truncation, grid edge).
   */
  PS_STATUS_NUMERIC = 3,
  /**
   * The result buffer is too small; the required length is reported.
   */
  PS_STATUS_BUFFER_TOO_SMALL = 4,
  /**
   * A Rust panic was caught at the boundary.
   */
  PS_STATUS_PANIC = 5,
} PsStatus;

/**
 * Environment model selector.
 */
typedef enum PsModelKind {
  /**
   * Caldeira-Leggett, position diffusion only. `a = γ`, `b = k_BT`.
   */
  PS_MODEL_KIND_CL = 0,
  /**
   * Caldeira-Leggett with friction. `a = γ`, `b = k_BT`.
   */
  PS_MODEL_KIND_CL_FULL = 1,
  /**
   * Correlated noise. `a = λ`, `b = σ`.
   */
  PS_MODEL_KIND_CORRELATED = 2,
  /**
   * Quantum optical master equation. `a = Γ`, `b = N`.
   */
  PS_MODEL_KIND_QOME = 3,
} PsModelKind;

typedef enum PsMeasure {
  PS_MEASURE_RATE = 0,
  PS_MEASURE_PERIOD_AVERAGED = 1,
} PsMeasure;

typedef enum PsEvaluation {
  PS_EVALUATION_ANALYTIC = 0,
  PS_EVALUATION_NUMERIC = 1,
} PsEvaluation;

/**
 * Generator examined by `ps_cp_check`.
 */
typedef enum PsGenerator {
  PS_GENERATOR_HAMILTONIAN = 0,
  /**
   * Caldeira-Leggett with friction, before averaging.
   */
  PS_GENERATOR_CL_FULL = 1,
  /**
   * Caldeira-Leggett with friction, averaged over the free motion.
   */
  PS_GENERATOR_CL_AVERAGED = 2,
  PS_GENERATOR_QOME = 3,
} PsGenerator;

/**
 * Series recorded by `ps_propagate`.
 */
typedef enum PsSeries {
  PS_SERIES_TIME = 0,
  PS_SERIES_LINEAR_ENTROPY = 1,
  PS_SERIES_MEAN_X = 2,
  PS_SERIES_MEAN_P = 3,
  PS_SERIES_VAR_X = 4,
  PS_SERIES_VAR_P = 5,
  PS_SERIES_TRACE_DRIFT = 6,
  PS_SERIES_HERMITICITY_DEFECT = 7,
} PsSeries;

/**
 * Opaque sieve landscape.
 */
typedef struct PsSieve PsSieve;

/**
 * Opaque trajectory.
 */
typedef struct PsTrajectory PsTrajectory;

typedef struct PsOscillator {
  double mass;
  double omega;
  double hbar;
} PsOscillator;

typedef struct PsModel {
  enum PsModelKind kind;
  double a;
  double b;
} PsModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread. Empty if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *ps_last_error(void);

/**
 * Crate version as a static NUL-terminated string.
 */
const char *ps_version(void);

/**
 * Bose-Einstein occupation `1/(e^x − 1)` for `x = ħω/k_BT > 0`.
 *
 * # Safety
 * `out` must be null or point to writable memory.
 */
enum PsStatus ps_thermal_occupation(double beta_hbar_omega, double *out);

/**
 * Scans `n` log-spaced squeezed vacua between `s_lo` and `s_hi`.
 * `osc` may be null for natural units.
 *
 * # Safety
 * `model` and `out` must be valid pointers.
 */
enum PsStatus ps_sieve_run(const struct PsOscillator *osc,
                           const struct PsModel *model,
                           double s_lo,
                           double s_hi,
                           uintptr_t n,
                           enum PsMeasure measure,
                           enum PsEvaluation evaluation,
                           struct PsSieve **out);

/**
 * Number of family members, or 0 for a null handle.
 *
 * # Safety
 * `h` must be null or a live handle from `ps_sieve_run`.
 */
uintptr_t ps_sieve_len(const struct PsSieve *h);

/**
 * Copies the landscape values. `len` receives the member count.
 *
 * # Safety
 * `h` must be a live handle; `buf` must hold `cap` doubles.
 */
enum PsStatus ps_sieve_values(const struct PsSieve *h, double *buf, uintptr_t cap, uintptr_t *len);

/**
 * Copies the squeeze parameters of the family.
 *
 * # Safety
 * `h` must be a live handle; `buf` must hold `cap` doubles.
 */
enum PsStatus ps_sieve_squeeze(const struct PsSieve *h, double *buf, uintptr_t cap, uintptr_t *len);

/**
 * Index and squeeze of the minimum, and whether it was a tie.
 *
 * # Safety
 * `h` must be a live handle; output pointers may be null.
 */
enum PsStatus ps_sieve_argmin(const struct PsSieve *h,
                              uintptr_t *index,
                              double *squeeze,
                              bool *tie);

/**
 * Whether the landscape is flat (max/min ≤ 1.05).
 *
 * # Safety
 * `h` must be null or a live handle.
 */
bool ps_sieve_is_flat(const struct PsSieve *h);

/**
 * # Safety
 * `h` must be null or a handle from `ps_sieve_run` not yet freed.
 */
void ps_sieve_free(struct PsSieve *h);

/**
 * Complete-positivity check of a generator on `dim` Fock levels.
 * `model` may be null for the Hamiltonian generator.
 *
 * # Safety
 * Non-null pointers must be valid.
 */
enum PsStatus ps_cp_check(const struct PsOscillator *osc,
                          enum PsGenerator generator,
                          const struct PsModel *model,
                          uintptr_t dim,
                          double *min_eigenvalue,
                          bool *is_gksl);

/**
 * Propagates the Gaussian state `(x0, p0, s)` for `n_steps` of `dt`.
 *
 * Grid models use `grid_n` points on `[-half_span, half_span]`. The QOME
 * projects onto `n_max + 1` Fock levels and ignores the grid after
 * projection.
 *
 * # Safety
 * `model` and `out` must be valid pointers; `osc` may be null.
 */
enum PsStatus ps_propagate(const struct PsOscillator *osc,
                           const struct PsModel *model,
                           double x0,
                           double p0,
                           double squeeze,
                           uintptr_t grid_n,
                           double half_span,
                           uintptr_t n_max,
                           double dt,
                           uintptr_t n_steps,
                           struct PsTrajectory **out);

/**
 * Number of recorded samples (`n_steps + 1`), or 0 for a null handle.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
uintptr_t ps_trajectory_len(const struct PsTrajectory *h);

/**
 * Copies one recorded series.
 *
 * # Safety
 * `h` must be a live handle; `buf` must hold `cap` doubles.
 */
enum PsStatus ps_trajectory_series(const struct PsTrajectory *h,
                                   enum PsSeries series,
                                   double *buf,
                                   uintptr_t cap,
                                   uintptr_t *len);

/**
 * Whether the run raised a degrading diagnostic (trace drift or loss of
 * positivity).
 *
 * # Safety
 * `h` must be null or a live handle.
 */
bool ps_trajectory_degraded(const struct PsTrajectory *h);

/**
 * # Safety
 * `h` must be null or a handle from `ps_propagate` not yet freed.
 */
void ps_trajectory_free(struct PsTrajectory *h);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PREDSIEVE_H */
