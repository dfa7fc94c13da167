#ifndef QWALK_H
#define QWALK_H

/* Generated by cbindgen from the qwalk-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every fallible call.
 */
typedef enum QwStatus {
  QW_STATUS_OK = 0,
  QW_STATUS_NULL_POINTER = 1,
  QW_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Requested collapse branch has vanishing probability.
   */
  QW_STATUS_DEGENERATE_COLLAPSE = 3,
  QW_STATUS_BUFFER_TOO_SMALL = 4,
} QwStatus;

/**
 * Subsystem selector for entropy queries.
 */
typedef enum QwSubsystem {
  QW_SUBSYSTEM_CONTROL = 0,
  QW_SUBSYSTEM_COIN = 1,
  QW_SUBSYSTEM_CONTROL_COIN = 2,
  QW_SUBSYSTEM_POSITION = 3,
  QW_SUBSYSTEM_COIN_POSITION = 4,
  QW_SUBSYSTEM_CONTROL_POSITION = 5,
} QwSubsystem;

/**
 * Correlation selector: the six bipartite MI measures and the cumulative
 * correlation measure of the control+coin register.
 */
typedef enum QwCorrelation {
  QW_CORRELATION_MI_CTR_REST = 0,
  QW_CORRELATION_MI_CTR_COIN_POS = 1,
  QW_CORRELATION_MI_POS_CTR_COIN = 2,
  QW_CORRELATION_MI_COIN_POS = 3,
  QW_CORRELATION_MI_CTR_COIN = 4,
  QW_CORRELATION_MI_CTR_POS = 5,
  QW_CORRELATION_CCM = 6,
} QwCorrelation;

/**
 * Opaque walk-state handle.
 */
typedef struct QwState QwState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Allocates the initial search state |1, u_c, u_p> on a 2^(n/2) x 2^(n/2)
 * torus. `n_qubits` must be even and small enough to fit in memory.
 *
 * # Safety
 * `out` must point to writable storage for one pointer. The returned
 * handle must be released with [`qw_state_free`].
 */
enum QwStatus qw_state_new(uint32_t n_qubits, struct QwState **out);

/**
 * Deep-copies a state handle.
 *
 * # Safety
 * `state` must be a live handle from this library; `out` as in
 * [`qw_state_new`].
 */
enum QwStatus qw_state_clone(const struct QwState *state, struct QwState **out);

/**
 * Releases a handle. Passing NULL is a no-op.
 *
 * # Safety
 * `state` must be NULL or a live handle from this library; it must not be
 * used afterwards.
 */
void qw_state_free(struct QwState *state);

/**
 * Number of complex amplitudes (8 N).
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum QwStatus qw_state_num_amplitudes(const struct QwState *state, uint64_t *out);

/**
 * Euclidean norm of the state vector.
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum QwStatus qw_state_norm(const struct QwState *state, double *out);

/**
 * Applies one walk step (oracle then conditional walk) in place.
 *
 * # Safety
 * `state` must be a live handle.
 */
enum QwStatus qw_state_step(struct QwState *state,
                            double delta,
                            uint64_t target_x,
                            uint64_t target_y);

/**
 * Probability of finding the walker at (x, y) if position were measured.
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum QwStatus qw_state_target_probability(const struct QwState *state,
                                          uint64_t x,
                                          uint64_t y,
                                          double *out);

/**
 * Probability that measuring the control qubit now yields 0.
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum QwStatus qw_state_control_zero_probability(const struct QwState *state, double *out);

/**
 * Projects the control qubit onto `outcome` (0 or 1), renormalizes, and
 * reports the pre-collapse probability of that outcome.
 *
 * # Safety
 * `state` must be a live handle; `out_probability` may be NULL when the
 * probability is not wanted.
 */
enum QwStatus qw_state_collapse_control(struct QwState *state,
                                        uint32_t outcome,
                                        double *out_probability);

/**
 * Von Neumann entropy (bits) of a subsystem of the normalized state.
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum QwStatus qw_state_subsystem_entropy(const struct QwState *state,
                                         enum QwSubsystem subsystem,
                                         double *out);

/**
 * One correlation measure of the current state.
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum QwStatus qw_state_correlation(const struct QwState *state,
                                   enum QwCorrelation kind,
                                   double *out);

/**
 * Steps for the unitary walk to approach the marked site:
 * round((pi/4) sqrt(N (log2 N + tan^2(delta)/4))).
 *
 * # Safety
 * `out` must be writable.
 */
enum QwStatus qw_t_delta(uint32_t n_qubits, double delta, uint64_t *out);

/**
 * The standard step budget round((pi/4) sqrt(N log2 N)).
 *
 * # Safety
 * `out` must be writable.
 */
enum QwStatus qw_default_kmax(uint32_t n_qubits, uint64_t *out);

/**
 * The N-adapted rotation angle arccos(1 / sqrt(log2 N)).
 *
 * # Safety
 * `out` must be writable.
 */
enum QwStatus qw_tulsi_delta(uint32_t n_qubits, double *out);

/**
 * Runs the walk with control measurements every `lapse` steps (0 means no
 * measurements) and writes the cumulative success probability P_c(k) for
 * k = 0..=k_max into `out`. `len` must be at least k_max + 1; the number
 * of rows written is k_max + 1 (a vanished branch keeps P_c constant).
 *
 * # Safety
 * `out` must point to at least `len` writable doubles.
 */
enum QwStatus qw_run_cumulative_probability(uint32_t n_qubits,
                                            double delta,
                                            uint64_t target_x,
                                            uint64_t target_y,
                                            uint64_t lapse,
                                            uint64_t k_max,
                                            double *out,
                                            uint64_t len);

/**
 * Samples `trials` experiments with per-trial seeds `seed + i` and writes
 * the success frequency and its binomial standard error.
 *
 * # Safety
 * `out_frequency` and `out_std_error` must be writable (either may be
 * NULL when not wanted).
 */
enum QwStatus qw_run_monte_carlo(uint32_t n_qubits,
                                 double delta,
                                 uint64_t target_x,
                                 uint64_t target_y,
                                 uint64_t lapse,
                                 uint64_t k_max,
                                 uint64_t trials,
                                 uint64_t seed,
                                 double *out_frequency,
                                 double *out_std_error);

/**
 * Library version as a static nul-terminated string.
 */
const char *qw_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QWALK_H */
