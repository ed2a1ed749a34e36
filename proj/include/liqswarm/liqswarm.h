/* liqswarm C API.
 *
 * Opaque handles over the simulator core. Every call that can fail returns
 * an lqs_status; the message for the most recent failure on the calling
 * thread is available from lqs_last_error(). Handles are not thread-safe,
 * distinct handles may be used from distinct threads.
 */
#ifndef LIQSWARM_H
#define LIQSWARM_H

#include <stddef.h>
#include <stdint.h>

#if defined(LQS_BUILDING_LIBRARY)
#define LQS_API __attribute__((visibility("default")))
#else
#define LQS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status values double as CLI exit codes for the first four entries. */
typedef enum lqs_status {
  LQS_OK = 0,
  LQS_ERR_CONFIG = 1,    /* parse or range error in a configuration */
  LQS_ERR_RUNTIME = 2,   /* invariant violation or I/O failure during a run */
  LQS_ERR_PARTIAL = 3,   /* some runs of a sweep failed */
  LQS_ERR_ARGUMENT = 4,  /* null handle, bad index, buffer too small */
  LQS_ERR_EXISTS = 5     /* output directory already holds a run */
} lqs_status;

typedef enum lqs_rule { LQS_RULE_EXACT = 0, LQS_RULE_MINFILL = 1 } lqs_rule;

typedef struct lqs_config lqs_config;
typedef struct lqs_run lqs_run;

typedef struct lqs_episode {
  int64_t episode;
  int64_t total_cleared;
  int64_t initial_balance_sum;
  int64_t hit_count;
  int64_t paired_count;
} lqs_episode;

typedef struct lqs_summary {
  double total_liquidity;
  double recorded_liquidity;
  double mean_hit_rate_tail;
  int64_t episodes_to_threshold; /* -1 when the threshold is never reached */
} lqs_summary;

typedef struct lqs_trade {
  int32_t offer_i;
  int32_t offer_j;
  int32_t quantity;
  int matched;
} lqs_trade;

LQS_API const char* lqs_version(void);
LQS_API const char* lqs_last_error(void);

/* Configuration. A fresh config holds every default. */
LQS_API lqs_status lqs_config_create(lqs_config** out);
LQS_API lqs_status lqs_config_clone(const lqs_config* config, lqs_config** out);
LQS_API void lqs_config_destroy(lqs_config* config);
LQS_API lqs_status lqs_config_set(lqs_config* config, const char* key, const char* value);
LQS_API lqs_status lqs_config_load_file(lqs_config* config, const char* path);
/* Copies the value as text into buf. *required receives the needed size
 * including the terminator; buf == NULL is a pure size query. A short
 * buffer fails with LQS_ERR_ARGUMENT. */
LQS_API lqs_status lqs_config_get(const lqs_config* config, const char* key, char* buf,
                                  size_t len, size_t* required);
LQS_API lqs_status lqs_config_validate(const lqs_config* config);
LQS_API size_t lqs_config_key_count(void);
LQS_API const char* lqs_config_key_name(size_t index);
LQS_API const char* lqs_config_key_help(size_t index);

/* Runs an experiment in memory. */
LQS_API lqs_status lqs_run_create(const lqs_config* config, lqs_run** out);
LQS_API void lqs_run_destroy(lqs_run* run);
LQS_API size_t lqs_run_episode_count(const lqs_run* run);
LQS_API lqs_status lqs_run_episode(const lqs_run* run, size_t index, lqs_episode* out);
LQS_API lqs_status lqs_run_summary(const lqs_run* run, lqs_summary* out);
/* Writes the run's files into dir (config output_dir when dir is NULL). */
LQS_API lqs_status lqs_run_write(const lqs_run* run, const char* dir, int overwrite);

/* Sweep over comma-separated rules ("exact,minfill"), strategies
 * ("diff,local,global,random,greedy") and seeds ("1,2,3"). Run directories
 * are <out_dir>/<rule>_<strategy>_s<seed>. *failed receives the number of
 * failed runs; LQS_ERR_PARTIAL when it is non-zero. */
LQS_API lqs_status lqs_sweep(const lqs_config* base, const char* rules, const char* strategies,
                             const char* seeds, const char* out_dir, int overwrite, int jobs,
                             size_t* failed);

/* Recomputes series.csv and summary.csv from a run directory. window <= 0
 * and threshold < 0 select the values recorded in run.meta. */
LQS_API lqs_status lqs_report(const char* run_dir, int32_t window, double threshold,
                              lqs_summary* out);

/* Stage game. */
LQS_API lqs_status lqs_clear(lqs_rule rule, int32_t a_i, int32_t a_j, lqs_trade* out);
/* Writes up to `capacity` equilibria as (a_i, a_j) pairs into profiles
 * (2 * capacity ints); *count receives the total number found. */
LQS_API lqs_status lqs_enumerate_pure_nash(lqs_rule rule, int32_t balance_i, int32_t balance_j,
                                           int32_t* profiles, size_t capacity, size_t* count);

#ifdef __cplusplus
}
#endif

#endif /* LIQSWARM_H */
