#ifndef MICROPOLAR_H
#define MICROPOLAR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum MpsStatus {
  MPS_STATUS_OK = 0,
  MPS_STATUS_NULL_POINTER = 1,
  MPS_STATUS_INVALID_ARGUMENT = 2,
  MPS_STATUS_CONFIG_ERROR = 3,
  MPS_STATUS_NUMERICAL_ABORT = 4,
  MPS_STATUS_IO_ERROR = 5,
  MPS_STATUS_FORMAT_ERROR = 6,
  MPS_STATUS_PROPERTY_FAILED = 7,
  MPS_STATUS_PANIC = 8,
} MpsStatus;

/**
 * A running simulation.
 */
typedef struct MpsSimulation MpsSimulation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`). Returns the length the full message needs,
 * including the terminator. `buf` may be null to query the length.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t mps_last_error(char *buf, size_t len);

/**
 * Build a simulation from configuration text in the `key = value` format
 * used by `mpsim`. The handle must be released with
 * [`mps_simulation_destroy`].
 *
 * # Safety
 * `config` must be a NUL-terminated string and `out` a valid pointer.
 */
enum MpsStatus mps_simulation_create(const char *config, struct MpsSimulation **out);

/**
 * Advance by `steps` steps of the configured `dt`. On error the handle
 * keeps the last good state.
 *
 * # Safety
 * `sim` must come from [`mps_simulation_create`].
 */
enum MpsStatus mps_simulation_step(struct MpsSimulation *sim, uint64_t steps);

/**
 * # Safety
 * `sim` must come from [`mps_simulation_create`]; `t` must be valid.
 */
enum MpsStatus mps_simulation_time(const struct MpsSimulation *sim, double *t);

/**
 * `½‖u‖₂²` and `½‖w‖₂²`.
 *
 * # Safety
 * `sim` must come from [`mps_simulation_create`]; outputs must be valid.
 */
enum MpsStatus mps_simulation_energy(const struct MpsSimulation *sim,
                                     double *kinetic,
                                     double *micro);

/**
 * `‖Λ^σ u‖₂` and `‖Λ^σ w‖₂`.
 *
 * # Safety
 * `sim` must come from [`mps_simulation_create`]; outputs must be valid.
 */
enum MpsStatus mps_simulation_norm(const struct MpsSimulation *sim,
                                   double sigma,
                                   double *u_norm,
                                   double *w_norm);

/**
 * Write the current state as a checkpoint file.
 *
 * # Safety
 * `sim` must come from [`mps_simulation_create`]; `path` must be a
 * NUL-terminated string.
 */
enum MpsStatus mps_simulation_checkpoint(const struct MpsSimulation *sim, const char *path);

/**
 * Release a handle; null is ignored.
 *
 * # Safety
 * `sim` must be null or come from [`mps_simulation_create`], and must not be
 * used afterwards.
 */
void mps_simulation_destroy(struct MpsSimulation *sim);

/**
 * Run a named property suite; `failed` receives the number of failing
 * properties. Returns [`MpsStatus::PropertyFailed`] when it is nonzero.
 *
 * # Safety
 * `suite` must be a NUL-terminated string; `failed` must be valid.
 */
enum MpsStatus mps_verify(const char *suite, uint64_t seed, uint32_t *failed);

/**
 * Partial integral from `e` to `t` of a growth condition (`"log_sqrt"` or
 * `"quartic_log"`) for a registered `g` (`"g1"`, `"g2"`, `"g3"`, `"g_bad"`,
 * `"one"`).
 *
 * # Safety
 * String arguments must be NUL-terminated; `out` must be valid.
 */
enum MpsStatus mps_g_partial_integral(const char *g, const char *condition, double t, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MICROPOLAR_H */
