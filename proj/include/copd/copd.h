/* copd - Monte Carlo simulator of the coevolutionary optional prisoner's
 * dilemma on a periodic square lattice.
 *
 * C API of the shared library. All state lives behind opaque handles;
 * every function that can fail returns a copd_status, and functions with a
 * (char *err, size_t errcap) pair copy a human-readable diagnostic into err
 * (always NUL-terminated, possibly truncated) on failure.
 *
 * Determinism contract: identical (configuration, seed) pairs produce
 * identical results on every platform, byte for byte in all exported files.
 * Replicate seeds derive from a base seed by the pure function
 *
 *   h0 = splitmix64(base);  h1 = splitmix64(h0 + point_index);
 *   seed = splitmix64(h1 + replicate_index)
 *
 * exposed as copd_replicate_seed() so external tooling can reproduce any
 * single run of a batch or sweep.
 */

#ifndef COPD_H
#define COPD_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef COPD_API
#define COPD_API __attribute__((visibility("default")))
#endif

typedef enum copd_status {
  COPD_OK = 0,
  COPD_ERR_INVALID_ARGUMENT = 1, /* NULL handle, bad index, bad enum value */
  COPD_ERR_CONSTRAINT = 2,       /* configuration violates a model bound  */
  COPD_ERR_PARSE = 3,            /* malformed config text or unknown key  */
  COPD_ERR_IO = 4,               /* file could not be read or written     */
  COPD_ERR_BUFFER_TOO_SMALL = 5, /* caller buffer cannot hold the output  */
  COPD_ERR_INTERNAL = 6,
} copd_status;

COPD_API const char *copd_status_str(copd_status status);
COPD_API const char *copd_version(void);

/* Stable strategy codes, also used in snapshot formats. */
enum {
  COPD_STRATEGY_COOPERATOR = 0,
  COPD_STRATEGY_DEFECTOR = 1,
  COPD_STRATEGY_ABSTAINER = 2,
};

typedef struct copd_config copd_config;
typedef struct copd_result copd_result;
typedef struct copd_sweep copd_sweep;

typedef struct copd_sample {
  uint64_t step;
  double rho_c;
  double rho_d;
  double rho_a;
  double mean_w; /* mean edge weight, diagnostic */
} copd_sample;

typedef struct copd_fractions {
  double rho_c;
  double rho_d;
  double rho_a;
} copd_fractions;

typedef struct copd_aggregate {
  copd_fractions mean;
  copd_fractions sd; /* sample standard deviation, 0 for one replicate */
  uint32_t replicates;
} copd_aggregate;

/* ── Configuration ──────────────────────────────────────────────────── */

/* Desk profile: side 50, 2e4 MC steps, tail window 1e3, 5 replicates. */
COPD_API copd_config *copd_config_new(void);
/* Paper profile: side 102, 1e5 MC steps, tail window 1e3, 10 replicates. */
COPD_API copd_config *copd_config_new_paper(void);
COPD_API copd_config *copd_config_clone(const copd_config *cfg);
COPD_API void copd_config_free(copd_config *cfg);

/* Keys and value syntax are the config file format: side, b, l, big_delta,
 * small_delta, steps, tail_window, seeding.mode, seeding.abstainer_fraction,
 * seeding.placement, rng_seed, replicates, snapshot_steps. */
COPD_API copd_status copd_config_set(copd_config *cfg, const char *key,
                                     const char *value, char *err,
                                     size_t errcap);
COPD_API copd_status copd_config_get(const copd_config *cfg, const char *key,
                                     char *buf, size_t cap);

/* Applies the key=value pairs of a config file onto cfg; partial files are
 * fine, unknown keys are COPD_ERR_PARSE. */
COPD_API copd_status copd_config_load_file(copd_config *cfg, const char *path,
                                           char *err, size_t errcap);
COPD_API copd_status copd_config_save_file(const copd_config *cfg,
                                           const char *path);
/* Serialized key=value document. `needed` (optional) receives the full
 * length including the NUL. */
COPD_API copd_status copd_config_to_string(const copd_config *cfg, char *buf,
                                           size_t cap, size_t *needed);

/* COPD_OK when every model constraint holds; otherwise COPD_ERR_CONSTRAINT
 * with every violated bound (not just the first) listed in err. */
COPD_API copd_status copd_config_validate(const copd_config *cfg, char *err,
                                          size_t errcap);

/* ── Single runs ────────────────────────────────────────────────────── */

COPD_API copd_status copd_run(const copd_config *cfg, uint64_t seed,
                              copd_result **out, char *err, size_t errcap);
COPD_API void copd_result_free(copd_result *result);

COPD_API uint64_t copd_result_series_len(const copd_result *result);
COPD_API copd_status copd_result_sample(const copd_result *result,
                                        uint64_t index, copd_sample *out);
COPD_API copd_status copd_result_final(const copd_result *result,
                                       copd_fractions *out);
COPD_API uint64_t copd_result_seed(const copd_result *result);

COPD_API copd_status copd_result_write_timeseries_csv(
    const copd_result *result, const char *path);

typedef enum copd_snapshot_format {
  COPD_SNAPSHOT_TEXT = 0, /* side lines of side chars from {C,D,A}       */
  COPD_SNAPSHOT_PPM = 1,  /* binary P6, C blue, D red, A green           */
} copd_snapshot_format;

COPD_API uint32_t copd_result_snapshot_count(const copd_result *result);
COPD_API copd_status copd_result_snapshot_step(const copd_result *result,
                                               uint32_t index, uint64_t *step);
/* Renders the snapshot taken at MC step `step`. With buf == NULL, *written
 * receives the required size. */
COPD_API copd_status copd_result_snapshot(const copd_result *result,
                                          uint64_t step,
                                          copd_snapshot_format format,
                                          void *buf, size_t cap,
                                          size_t *written);
COPD_API copd_status copd_result_write_snapshot(const copd_result *result,
                                                uint64_t step,
                                                copd_snapshot_format format,
                                                const char *path);

/* Outcome label over tail-averaged fractions: a strategy is present above
 * `threshold`; one of C-dominant, D-dominant, A-dominant, CD, CA, DA, CDA. */
COPD_API copd_status copd_classify_fractions(const copd_fractions *fractions,
                                             double threshold, char *buf,
                                             size_t cap);

/* ── Replicates ─────────────────────────────────────────────────────── */

/* The documented seed derivation (see file header). */
COPD_API uint64_t copd_replicate_seed(uint64_t base_seed, uint64_t point_index,
                                      uint64_t replicate_index);

/* Runs n replicates on up to `jobs` threads (0 = hardware concurrency).
 * `results`, when non-NULL, must have room for n handles, each to be freed
 * by the caller; `agg` (optional) receives mean and standard deviation. */
COPD_API copd_status copd_run_replicates(const copd_config *cfg,
                                         uint64_t base_seed, uint32_t n,
                                         uint32_t jobs, copd_result **results,
                                         copd_aggregate *agg, char *err,
                                         size_t errcap);

/* ── Weight state space ─────────────────────────────────────────────── */

/* Link-weight values reachable from w = 1 under steps of +/- big_delta
 * clamped into [1 - small_delta, 1 + small_delta]; sorted ascending.
 * With values == NULL, *count receives the state count only. */
COPD_API copd_status copd_reachable_weights(double big_delta,
                                            double small_delta, double *values,
                                            size_t cap, size_t *count);

/* ── Parameter sweeps ───────────────────────────────────────────────── */

/* Cartesian sweep over axes applied onto a base config. Zero axes make a
 * single-point sweep, which is exactly a replicate batch. */
COPD_API copd_sweep *copd_sweep_new(const copd_config *base);
COPD_API void copd_sweep_free(copd_sweep *sweep);

/* param is one of b, l, big_delta, small_delta, abstainer_fraction. */
COPD_API copd_status copd_sweep_add_axis(copd_sweep *sweep, const char *param,
                                         const double *values, size_t n,
                                         char *err, size_t errcap);

/* Runs every point with base.replicates replicates each and writes
 * summary.csv, manifest.csv and per-replicate outputs (timeseries.csv plus
 * snapshots at the configured steps) under out_dir, laid out as
 * point_NNNN/rep_NN/. Repeated invocations with the same base_seed produce
 * byte-identical trees for any jobs value. Invalid points are skipped and
 * reported in the summary's error column. *rows (optional) receives the
 * number of summary rows. */
COPD_API copd_status copd_sweep_run(copd_sweep *sweep, uint64_t base_seed,
                                    const char *out_dir, uint32_t jobs,
                                    int write_outputs, uint64_t *rows,
                                    char *err, size_t errcap);

/* Post-run accessors for the summary content. */
COPD_API uint64_t copd_sweep_point_count(const copd_sweep *sweep);
COPD_API copd_status copd_sweep_point_aggregate(const copd_sweep *sweep,
                                                uint64_t point_index,
                                                copd_aggregate *agg);
/* Empty string when the point ran; otherwise the validation failure. */
COPD_API copd_status copd_sweep_point_error(const copd_sweep *sweep,
                                            uint64_t point_index, char *buf,
                                            size_t cap);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* COPD_H */
