#ifndef FRAME_QFI_H
#define FRAME_QFI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FqfiStatus {
  FQFI_STATUS_OK = 0,
  FQFI_STATUS_NULL_POINTER = 1,
  FQFI_STATUS_INVALID_ARGUMENT = 2,
  FQFI_STATUS_SINGULAR_ROTATION = 3,
  FQFI_STATUS_SINGULAR_FISHER = 4,
  FQFI_STATUS_DEGENERATE_STATE = 5,
  FQFI_STATUS_DEGENERATE_INVERSION = 6,
  FQFI_STATUS_INCONSISTENT_MOMENTS = 7,
  FQFI_STATUS_NOT_CONVERGED = 8,
  FQFI_STATUS_BUFFER_TOO_SMALL = 9,
  FQFI_STATUS_PANIC = 10,
} FqfiStatus;

/**
 * Pure-spin-state handle.
 */
typedef struct FqfiState FqfiState;

/**
 * Aggregate of a batch of protocol runs. Undefined bounds are NaN.
 */
typedef struct FqfiProtocolSummary {
  size_t batches;
  size_t failed;
  double mean_squared_error[3];
  double total_mean_squared_error;
  double total_mse_stderr;
  double crb_trace;
  double crb_per_shot;
  /**
   * 1 if the total MSE respects the bound with slack, 0 if not, -1 if undefined.
   */
  int32_t respects_bound;
} FqfiProtocolSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failing call on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *fqfi_last_error(void);

/**
 * `(|0..0> + e^{i delta} |1..1>)/sqrt(2)` on `n` qubits.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum FqfiStatus fqfi_state_ghz(uint32_t n, double delta, struct FqfiState **out);

/**
 * State of spin `twice_j / 2` from `twice_j + 1` Dicke amplitudes (m = j first).
 * The vector is normalized.
 *
 * # Safety
 * `re` and `im` must point to `len` doubles; `out` must be valid.
 */
enum FqfiStatus fqfi_state_from_amplitudes(uint32_t twice_j,
                                           const double *re,
                                           const double *im,
                                           size_t len,
                                           struct FqfiState **out);

/**
 * # Safety
 * `state` must come from this library and not be freed twice. Null is a no-op.
 */
void fqfi_state_free(struct FqfiState *state);

/**
 * `2j + 1`, or 0 for a null handle.
 *
 * # Safety
 * `state` must be null or a live handle.
 */
size_t fqfi_state_dim(const struct FqfiState *state);

/**
 * Copies the amplitudes into `re` and `im`, each of capacity `len >= dim`.
 *
 * # Safety
 * `re` and `im` must point to `len` writable doubles.
 */
enum FqfiStatus fqfi_state_amplitudes(const struct FqfiState *state,
                                      double *re,
                                      double *im,
                                      size_t len);

/**
 * Pure-state QFI matrix in row-major order over (alpha, beta, gamma).
 *
 * # Safety
 * `out` must point to 9 writable doubles.
 */
enum FqfiStatus fqfi_qfi_pure(const struct FqfiState *state,
                              double alpha,
                              double beta,
                              double gamma,
                              double *out);

/**
 * Haar average of `Tr F` from the spin moments.
 *
 * # Safety
 * `out` must be valid.
 */
enum FqfiStatus fqfi_haar_analytic(const struct FqfiState *state, double *out);

/**
 * Monte Carlo Haar average over `n_samples >= 100` rotations.
 *
 * # Safety
 * `value` and `stderr` must be valid.
 */
enum FqfiStatus fqfi_haar_mc(const struct FqfiState *state,
                             size_t n_samples,
                             uint64_t seed,
                             double *value,
                             double *stderr);

/**
 * `Tr F^{-1}` of the rotated `n`-qubit GHZ probe.
 *
 * # Safety
 * `out` must be valid.
 */
enum FqfiStatus fqfi_ghz_crb_trace_inverse(uint32_t n, double beta, double *out);

/**
 * Anti-coherent comparison bound `3/(N(N+1)) (1 + 2/sin^2 beta)`.
 *
 * # Safety
 * `out` must be valid.
 */
enum FqfiStatus fqfi_goldberg_bound(uint32_t n, double beta, double *out);

/**
 * `Tr F` of the dephased GHZ probe, `N(1 + sin^2 b) + p^2 N^2 (1 + cos^2 b)`.
 *
 * # Safety
 * `out` must be valid.
 */
enum FqfiStatus fqfi_dephased_trace_qfi(uint32_t n, double p, double beta, double *out);

/**
 * Exact factor multiplying the QFI under depolarizing noise of strength `p`.
 *
 * # Safety
 * `out` must be valid.
 */
enum FqfiStatus fqfi_depolarizing_factor(uint32_t n, double p, double *out);

/**
 * Majorana points as polar and azimuthal angles; capacity `len >= 2j`.
 * `count` receives `2j`.
 *
 * # Safety
 * `theta` and `phi` must point to `len` writable doubles; `count` must be valid.
 */
enum FqfiStatus fqfi_majorana(const struct FqfiState *state,
                              double *theta,
                              double *phi,
                              size_t len,
                              size_t *count);

/**
 * Maximizes the Haar-averaged `Tr F` over spin-`twice_j/2` states.
 *
 * The best state and value are written even when no restart converged, in
 * which case the status is `NotConverged`.
 *
 * # Safety
 * `value` and `best` must be valid; `*best` must be freed by the caller.
 */
enum FqfiStatus fqfi_maximize(uint32_t twice_j,
                              size_t restarts,
                              double tol,
                              size_t max_iter,
                              uint64_t seed,
                              double *value,
                              struct FqfiState **best);

/**
 * Runs `batches` independent estimation runs of the GHZ protocol with
 * `shots` per spin setting and `3 shots` parity shots.
 *
 * # Safety
 * `out` must be valid.
 */
enum FqfiStatus fqfi_run_protocol(uint32_t n,
                                  double alpha,
                                  double beta,
                                  double gamma,
                                  size_t shots,
                                  size_t batches,
                                  uint64_t seed,
                                  struct FqfiProtocolSummary *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRAME_QFI_H */
