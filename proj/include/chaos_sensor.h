/* Chaos sensor toolkit: C API of libchaossensor.
 *
 * Simulates the Hindmarsh-Rose bursting neuron, computes fuzzy entropy of
 * inter-spike-interval series, builds labeled window datasets, and trains and
 * evaluates a perceptron regressor that approximates that entropy.
 *
 * All functions return cs_status; CS_OK is 0. On failure, a thread-local
 * message is available from cs_last_error(). Objects returned through
 * cs_*_t** out parameters are owned by the caller and released with the
 * matching *_free function.
 */
#ifndef CHAOS_SENSOR_H
#define CHAOS_SENSOR_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cs_status {
  CS_OK = 0,
  CS_ERR_INVALID_ARGUMENT = 1,
  CS_ERR_NUMERIC = 2,   /* non-finite state, diverging loss */
  CS_ERR_STEP_CAP = 3,  /* integration cap reached (non-spiking parameters) */
  CS_ERR_TOO_SHORT = 4, /* series shorter than the operation requires */
  CS_ERR_IO = 5,
  CS_ERR_FORMAT = 6,
  CS_ERR_INTERNAL = 7
} cs_status;

const char* cs_status_name(cs_status s);
/* Message of the most recent failure on this thread; never NULL. */
const char* cs_last_error(void);
const char* cs_version(void);

/* Releases buffers returned through double or size_t out-pointer params. */
void cs_buffer_free(void* p);

/* ---------------------------------------------------------------- */
/* Hindmarsh-Rose simulation                                         */

typedef struct cs_hr_params {
  double r;                /* slow-current parameter */
  double i_ex;             /* external current */
  double x0, y0, z0;       /* initial state */
  double dt;               /* integration step */
  double t_transient;      /* span discarded before spike counting */
  size_t target_intervals; /* inter-spike intervals to collect */
  double spike_threshold;  /* level a local maximum must exceed */
  size_t max_steps;        /* hard cap per integration */
} cs_hr_params;

/* r=0.0055, i_ex=3.25, origin start, dt=0.01, transient 1000, 500 intervals,
 * threshold 1.0, cap 1e8. */
void cs_hr_params_init(cs_hr_params* p);

typedef struct cs_simulation cs_simulation;

/* Integrates until target_intervals intervals are collected past the
 * transient. keep_trajectory != 0 retains the full path for export. */
cs_status cs_simulate(const cs_hr_params* p, int keep_trajectory, cs_simulation** out);
void cs_simulation_free(cs_simulation* s);

size_t cs_simulation_interval_count(const cs_simulation* s);
cs_status cs_simulation_intervals(const cs_simulation* s, double* out, size_t capacity);
/* CSV `index,interval`. */
cs_status cs_simulation_write_intervals_csv(const cs_simulation* s, const char* path);
/* CSV `t,x,y,z`; fails unless the simulation kept its trajectory. */
cs_status cs_simulation_write_trajectory_csv(const cs_simulation* s, const char* path);

/* Interval series per r on an even grid over [r_min, r_max], flattened to
 * CSV `r,interval`. Failing r values are skipped and counted in
 * *failures (may be NULL); the last failure message is in cs_last_error(). */
cs_status cs_bifurcation_csv(const cs_hr_params* tmpl, double i_ex, double r_min, double r_max,
                             size_t n_r, size_t intervals_per_r, const char* path,
                             size_t* failures);

/* ---------------------------------------------------------------- */
/* Fuzzy entropy                                                     */

typedef struct cs_fuzzyen_params {
  size_t m;        /* embedding dimension */
  double r2;       /* fuzzy exponent */
  double r1;       /* tolerance: absolute, or factor x std when relative */
  int r1_relative; /* nonzero: r1 is a factor on the population std */
} cs_fuzzyen_params;

/* m=1, r2=1, r1=0.01 x std (the sensitivity-optimal setting). */
void cs_fuzzyen_params_init(cs_fuzzyen_params* p);

/* degenerate (may be NULL) is set when a constant series under relative r1
 * yields entropy 0 by convention; clamp_count (may be NULL) counts phi
 * values clamped before the log. */
cs_status cs_fuzzy_entropy(const double* series, size_t n, const cs_fuzzyen_params* p,
                           double* value, int* degenerate, size_t* clamp_count);

/* ---------------------------------------------------------------- */
/* Datasets                                                          */

typedef struct cs_dataset cs_dataset;

typedef struct cs_dataset_stats {
  double mean;
  double window_mean_min;
  double window_mean_max;
  double min_value;
  double max_value;
} cs_dataset_stats;

typedef struct cs_base_config {
  double i_ex;
  double r_min, r_max;
  size_t n_r;
  size_t intervals_per_r;
  size_t nl;
  size_t shift;
  size_t windows_per_r;
  cs_hr_params hr;
  cs_fuzzyen_params fe;
} cs_base_config;

/* i_ex=3.25, r in [5e-3, 1.5e-2] over 100 values, 500 intervals per r,
 * nl=50, shift=4, 100 windows per r. */
void cs_base_config_init(cs_base_config* cfg);

cs_status cs_dataset_build(const cs_base_config* cfg, cs_dataset** out);
cs_status cs_dataset_load(const char* path, cs_dataset** out);
cs_status cs_dataset_save(const cs_dataset* ds, const char* path);
void cs_dataset_free(cs_dataset* ds);

size_t cs_dataset_size(const cs_dataset* ds);
size_t cs_dataset_window_len(const cs_dataset* ds);
cs_status cs_dataset_get_stats(const cs_dataset* ds, cs_dataset_stats* out);
/* Window values (length cs_dataset_window_len) and entropy target of entry i. */
cs_status cs_dataset_window(const cs_dataset* ds, size_t i, double* values, size_t capacity,
                            double* target);
cs_status cs_dataset_targets(const cs_dataset* ds, double* out, size_t capacity);
/* Subtracts `mean` from every element in place; targets unchanged. */
cs_status cs_dataset_normalize(cs_dataset* ds, double mean);
cs_status cs_dataset_merge(const cs_dataset* a, const cs_dataset* b, cs_dataset** out);
/* Lengths of runs of windows sharing (tag, r); *out is cs_buffer_free'd. */
cs_status cs_dataset_block_lengths(const cs_dataset* ds, size_t** out, size_t* n_blocks);

/* One experimental source: a series of inter-spike periods with a tag. */
typedef struct cs_period_source {
  const char* tag;
  const double* values;
  size_t n;
} cs_period_source;

/* Windows every source with the given length and shift 1, labeling each
 * window with its fuzzy entropy. Sources shorter than one window are skipped
 * and counted in *skipped (may be NULL). */
cs_status cs_dataset_build_experimental(const cs_period_source* sources, size_t n_sources,
                                        size_t nl, const cs_fuzzyen_params* fe, cs_dataset** out,
                                        size_t* skipped);

/* ---------------------------------------------------------------- */
/* Signal ingestion                                                  */

/* Zero-phase first-order low-pass (-3 dB at cutoff_hz), in place. */
cs_status cs_lowpass(double* samples, size_t n, double sample_rate, double cutoff_hz);

/* Peak times (seconds) of positive local maxima; *times is
 * cs_buffer_free'd. height_fraction is relative to the global range. */
cs_status cs_extract_peaks(const double* samples, size_t n, double sample_rate,
                           double height_fraction, size_t local_points, double** times,
                           size_t* n_peaks);

/* ---------------------------------------------------------------- */
/* Perceptron                                                        */

typedef struct cs_model cs_model;

typedef struct cs_train_config {
  uint64_t seed;
  size_t epochs;
  double learning_rate;
  size_t batch_size;
  double l2; /* decoupled weight decay on the weights */
  int shuffle;
} cs_train_config;

/* 300 epochs, lr 1e-3, batch 200, decay 0.1, shuffled. */
void cs_train_config_init(cs_train_config* cfg);

cs_status cs_train(const cs_dataset* ds, size_t nh, const cs_train_config* cfg, cs_model** out);
cs_status cs_model_load(const char* path, cs_model** out);
cs_status cs_model_save(const cs_model* m, const char* path);
void cs_model_free(cs_model* m);

size_t cs_model_nl(const cs_model* m);
size_t cs_model_nh(const cs_model* m);
cs_status cs_model_forward(const cs_model* m, const double* window, size_t n, double* out);
/* Replaces the first-layer weights of an nh=1 model by their mean. */
cs_status cs_model_simplify_equal_weights(const cs_model* m, cs_model** out);

/* ---------------------------------------------------------------- */
/* Evaluation                                                        */

typedef struct cs_metrics {
  double r2;
  double rmse;
  double mape_percent;
} cs_metrics;

cs_status cs_compute_metrics(const double* targets, const double* predictions, size_t n,
                             cs_metrics* out);

typedef struct cs_cv_result cs_cv_result;

/* K-fold cross-validation: seeded shuffle, contiguous folds, one training
 * per fold with a seed derived from (cfg->seed, fold). */
cs_status cs_kfold_cv(const cs_dataset* ds, size_t k, size_t nh, const cs_train_config* cfg,
                      cs_cv_result** out);
void cs_cv_result_free(cs_cv_result* r);
size_t cs_cv_result_folds(const cs_cv_result* r);
cs_status cs_cv_result_fold_metrics(const cs_cv_result* r, size_t fold, cs_metrics* out);
cs_status cs_cv_result_aggregate(const cs_cv_result* r, cs_metrics* out);
/* Out-of-fold predictions in dataset order. */
cs_status cs_cv_result_predictions(const cs_cv_result* r, double* out, size_t capacity);

/* Trains on train_ds, evaluates on test_ds; predictions (may be NULL) must
 * hold cs_dataset_size(test_ds) values. */
cs_status cs_cross_base(const cs_dataset* train_ds, const cs_dataset* test_ds, size_t nh,
                        const cs_train_config* cfg, cs_metrics* out, double* predictions);

/* Trailing moving average of span n that never crosses a block boundary;
 * block_lens (may be NULL for a single block) must sum to n_values. */
cs_status cs_average_over_n(const double* values, size_t n_values, size_t n,
                            const size_t* block_lens, size_t n_blocks, double* out);

typedef struct cs_sensor_chars {
  double en_av_order;
  double en_av_chaos;
  double en_r;
  double std_en_order;
  double std_en_chaos;
  double en_sens;
  double en_err_percent;
  int degenerate; /* en_r == 0: en_sens/en_err are NaN */
} cs_sensor_chars;

typedef enum cs_predictor_kind {
  CS_PREDICTOR_FUZZYEN = 0, /* direct entropy of the raw window */
  CS_PREDICTOR_MODEL = 1    /* model forward on the mean-shifted window */
} cs_predictor_kind;

typedef struct cs_characterize_config {
  cs_predictor_kind kind;
  cs_fuzzyen_params fe;     /* CS_PREDICTOR_FUZZYEN */
  const cs_model* model;    /* CS_PREDICTOR_MODEL; borrowed */
  double normalize_mean;    /* subtracted from windows before model forward */
  double i_ex;
  const double* chaotic_r;  /* NULL: the five built-in chaotic values */
  size_t n_chaotic;
  const double* regular_r;  /* NULL: the five built-in regular values */
  size_t n_regular;
  size_t nl;
  size_t shift;
  size_t windows_per_r;
  size_t intervals_per_r;
  size_t avg_n;             /* trailing average per r block; 1 = none */
  cs_hr_params hr;
} cs_characterize_config;

void cs_characterize_config_init(cs_characterize_config* cfg);

/* The built-in regime lists (5 values each) at i_ex=3.25. */
void cs_default_regimes(const double** chaotic_r, size_t* n_chaotic, const double** regular_r,
                        size_t* n_regular);

cs_status cs_characterize(const cs_characterize_config* cfg, cs_sensor_chars* out);

/* Direct-entropy characteristics per window length; out holds n_nl entries. */
cs_status cs_length_study(const size_t* nl_values, size_t n_nl,
                          const cs_characterize_config* cfg, cs_sensor_chars* out);

/* ---------------------------------------------------------------- */
/* File helpers (shared by the CLI and bindings)                     */

/* Atomic text write (temp file + rename). */
cs_status cs_write_text_file(const char* path, const char* content);

/* One numeric CSV column; `column` is a header name or 0-based index, ""
 * means the last column of a headerless file. *out is cs_buffer_free'd. */
cs_status cs_read_csv_column(const char* path, const char* column, double** out, size_t* n);

/* Waveform CSV `t,v` (header optional): samples plus the rate implied by
 * the time column. *samples is cs_buffer_free'd. */
cs_status cs_read_waveform_csv(const char* path, double** samples, size_t* n,
                               double* sample_rate);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CHAOS_SENSOR_H */
