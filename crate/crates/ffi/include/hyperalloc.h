#ifndef HYPERALLOC_H
#define HYPERALLOC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HaStatus {
  HA_STATUS_OK = 0,
  HA_STATUS_NULL_POINTER = 1,
  HA_STATUS_INVALID_CONFIG = 2,
  HA_STATUS_INVALID_ARGUMENT = 3,
  HA_STATUS_BUFFER_TOO_SMALL = 4,
  HA_STATUS_TOO_LARGE = 5,
  HA_STATUS_CONSTRAINT_VIOLATION = 6,
  HA_STATUS_PANIC = 7,
} HaStatus;

typedef enum HaAlgorithm {
  HA_ALGORITHM_GRAPH = 0,
  HA_ALGORITHM_HYPERGRAPH = 1,
  HA_ALGORITHM_OPTIMAL = 2,
} HaAlgorithm;

/**
 * Simulation parameters.
 */
typedef struct HaConfig HaConfig;

/**
 * One drop: positions and fading for a trial index under a config.
 */
typedef struct HaTrial HaTrial;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message on this thread, or NULL. Valid until the next
 * failing call on this thread.
 */
const char *ha_last_error_message(void);

/**
 * Default parameters.
 */
enum HaStatus ha_config_default(struct HaConfig **out);

/**
 * Parses a JSON config; absent keys take defaults.
 */
enum HaStatus ha_config_from_json(const char *json, struct HaConfig **out);

void ha_config_free(struct HaConfig *config);

/**
 * N + M, or 0 for NULL.
 */
size_t ha_config_n_vertices(const struct HaConfig *config);

/**
 * Draws the drop and fading of trial `trial_index`.
 */
enum HaStatus ha_trial_new(const struct HaConfig *config,
                           uint64_t trial_index,
                           struct HaTrial **out);

void ha_trial_free(struct HaTrial *trial);

/**
 * N + M, or 0 for NULL.
 */
size_t ha_trial_n_vertices(const struct HaTrial *trial);

/**
 * Runs an allocator and writes one channel per vertex into `channels`
 * (`len` must be at least N + M).
 */
enum HaStatus ha_allocate(const struct HaTrial *trial,
                          enum HaAlgorithm algorithm,
                          int64_t *channels,
                          size_t len);

/**
 * Cell capacity in bit/s/Hz of the allocation in `channels`.
 */
enum HaStatus ha_capacity(const struct HaTrial *trial,
                          const int64_t *channels,
                          size_t len,
                          double *out_capacity);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HYPERALLOC_H */
