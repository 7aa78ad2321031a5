#ifndef PSYRISK_H
#define PSYRISK_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of a call.
 */
typedef enum PsyriskStatus {
  PSYRISK_STATUS_OK = 0,
  PSYRISK_STATUS_NULL_POINTER = 1,
  /**
   * Invalid configuration or parameter value.
   */
  PSYRISK_STATUS_CONFIG = 2,
  /**
   * Degenerate model or missing data.
   */
  PSYRISK_STATUS_RUNTIME = 3,
  PSYRISK_STATUS_IO = 4,
  /**
   * Malformed argument, such as an index out of bounds or bad UTF-8.
   */
  PSYRISK_STATUS_INVALID_ARGUMENT = 5,
  PSYRISK_STATUS_PANIC = 6,
} PsyriskStatus;

/**
 * Run configuration.
 */
typedef struct PsyriskConfig PsyriskConfig;

/**
 * Rounds of one simulated episode.
 */
typedef struct PsyriskTrajectory PsyriskTrajectory;

/**
 * One round. Reals that do not apply are NaN; tri-state fields are -1 when
 * absent. Outcomes are 1 for success and 0 for failure; impulses are 0 for
 * normal and 1 for misattributed.
 */
typedef struct PsyriskRound {
  uint64_t round_index;
  double p0;
  double invest_fraction;
  double p1;
  double h;
  int8_t embezzled;
  int8_t investor_outcome;
  int8_t manager_outcome;
  int8_t investor_impulse;
  int8_t manager_impulse;
  uint64_t investor_successes;
  uint64_t investor_failures;
  uint64_t manager_successes;
  uint64_t manager_failures;
} PsyriskRound;

/**
 * Aggregate over replications. Statistics that do not apply are NaN.
 */
typedef struct PsyriskAggregate {
  uint64_t episodes;
  uint64_t rounds;
  uint64_t invested_rounds;
  uint64_t embezzlements;
  double mean_p0;
  double se_p0;
  double mean_p1;
  double se_p1;
  double invest_rate;
  double mean_fraction;
  double embezzle_rate;
  double empirical_success_freq;
  double closed_form_confidence;
} PsyriskAggregate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *psyrisk_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *psyrisk_version(void);

/**
 * Built-in default configuration.
 *
 * # Safety
 * `out` must be valid for writing a pointer.
 */
enum PsyriskStatus psyrisk_config_default(struct PsyriskConfig **out);

/**
 * Parses and validates a TOML configuration.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be valid for writing.
 */
enum PsyriskStatus psyrisk_config_from_toml(const char *text, struct PsyriskConfig **out);

/**
 * Releases a configuration. Null is ignored.
 *
 * # Safety
 * `config` must come from this library and not be used afterwards.
 */
void psyrisk_config_free(struct PsyriskConfig *config);

/**
 * Seed stored in the configuration.
 *
 * # Safety
 * `config` must be a live handle; `out` must be valid for writing.
 */
enum PsyriskStatus psyrisk_config_seed(const struct PsyriskConfig *config, uint64_t *out);

/**
 * Plays one episode of `config` with `seed`.
 *
 * # Safety
 * `config` must be a live handle; `out` must be valid for writing.
 */
enum PsyriskStatus psyrisk_simulate(const struct PsyriskConfig *config,
                                    uint64_t seed,
                                    struct PsyriskTrajectory **out);

/**
 * Number of rounds, or 0 for null.
 *
 * # Safety
 * `trajectory` must be null or a live handle.
 */
size_t psyrisk_trajectory_len(const struct PsyriskTrajectory *trajectory);

/**
 * Copies round `index` into `out`.
 *
 * # Safety
 * `trajectory` must be a live handle; `out` must be valid for writing.
 */
enum PsyriskStatus psyrisk_trajectory_round(const struct PsyriskTrajectory *trajectory,
                                            size_t index,
                                            struct PsyriskRound *out);

/**
 * Writes the trajectory as line-delimited JSON to `path`.
 *
 * # Safety
 * `trajectory` must be a live handle; `path` a NUL-terminated string.
 */
enum PsyriskStatus psyrisk_trajectory_write_jsonl(const struct PsyriskTrajectory *trajectory,
                                                  const char *path);

/**
 * Releases a trajectory. Null is ignored.
 *
 * # Safety
 * `trajectory` must come from this library and not be used afterwards.
 */
void psyrisk_trajectory_free(struct PsyriskTrajectory *trajectory);

/**
 * Confidence after `successes` and `failures` recalled experiences.
 *
 * # Safety
 * `out` must be valid for writing.
 */
enum PsyriskStatus psyrisk_confidence(double successes,
                                      double failures,
                                      double prior_success,
                                      double prior_failure,
                                      double *out);

/**
 * Long-run confidence with distortion `gamma`, true success frequency
 * `p_success` and the default recollection process.
 *
 * # Safety
 * `out` must be valid for writing.
 */
enum PsyriskStatus psyrisk_asymptotic_confidence(double gamma, double p_success, double *out);

/**
 * Runs `replications` episodes of `config` from `base_seed`.
 *
 * # Safety
 * `config` must be a live handle; `out` must be valid for writing.
 */
enum PsyriskStatus psyrisk_run_replications(const struct PsyriskConfig *config,
                                            uint64_t replications,
                                            uint64_t base_seed,
                                            struct PsyriskAggregate *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PSYRISK_H */
