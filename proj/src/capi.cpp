#include "chaos_sensor.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "csv.hpp"
#include "dataset.hpp"
#include "errors.hpp"
#include "evaluation.hpp"
#include "fuzzy_entropy.hpp"
#include "hr.hpp"
#include "mlp.hpp"
#include "signal.hpp"

struct cs_simulation {
  chaos::interval_series intervals;
  chaos::trajectory traj;  // empty unless kept
  bool has_trajectory = false;
};

struct cs_dataset {
  chaos::labeled_dataset ds;
};

struct cs_model {
  chaos::mlp_model m;
};

struct cs_cv_result {
  chaos::cv_result r;
};

namespace {

thread_local std::string g_last_error = "";

void set_error(const std::string& msg) { g_last_error = msg; }

cs_status status_of(chaos::errc c) {
  switch (c) {
    case chaos::errc::invalid_argument: return CS_ERR_INVALID_ARGUMENT;
    case chaos::errc::numeric: return CS_ERR_NUMERIC;
    case chaos::errc::step_cap: return CS_ERR_STEP_CAP;
    case chaos::errc::too_short: return CS_ERR_TOO_SHORT;
    case chaos::errc::io: return CS_ERR_IO;
    case chaos::errc::format: return CS_ERR_FORMAT;
  }
  return CS_ERR_INTERNAL;
}

template <typename Fn>
cs_status guarded(Fn&& fn) {
  try {
    fn();
    return CS_OK;
  } catch (const chaos::error& e) {
    set_error(e.what());
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    return CS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    set_error(e.what());
    return CS_ERR_INTERNAL;
  }
}

cs_status require(bool ok, const char* msg) {
  if (ok) return CS_OK;
  set_error(msg);
  return CS_ERR_INVALID_ARGUMENT;
}

chaos::hr_params to_core(const cs_hr_params& p) {
  chaos::hr_params out;
  out.r = p.r;
  out.i_ex = p.i_ex;
  out.x0 = p.x0;
  out.y0 = p.y0;
  out.z0 = p.z0;
  out.dt = p.dt;
  out.t_transient = p.t_transient;
  out.target_intervals = p.target_intervals;
  out.spike_threshold = p.spike_threshold;
  out.max_steps = p.max_steps;
  return out;
}

chaos::fuzzyen_params to_core(const cs_fuzzyen_params& p) {
  return {p.m, p.r2, p.r1, p.r1_relative != 0};
}

chaos::train_config to_core(const cs_train_config& c) {
  return {c.seed, c.epochs, c.learning_rate, c.batch_size, c.l2, c.shuffle != 0};
}

cs_metrics to_c(const chaos::fold_metrics& m) { return {m.r2, m.rmse, m.mape_percent}; }

cs_sensor_chars to_c(const chaos::sensor_characteristics& c) {
  return {c.en_av_order, c.en_av_chaos,   c.en_r,           c.std_en_order,
          c.std_en_chaos, c.en_sens,       c.en_err_percent, c.degenerate ? 1 : 0};
}

double* copy_out(const std::vector<double>& v) {
  double* p = static_cast<double*>(std::malloc(v.size() * sizeof(double)));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, v.data(), v.size() * sizeof(double));
  return p;
}

constexpr double kChaoticR[] = {0.0056, 0.0076, 0.0082, 0.0119, 0.0141};
constexpr double kRegularR[] = {0.0068, 0.0070, 0.0099, 0.0105, 0.0108};

chaos::regime_config regimes_of(const cs_characterize_config& cfg) {
  chaos::regime_config rc;
  rc.i_ex = cfg.i_ex;
  if (cfg.chaotic_r && cfg.n_chaotic > 0) {
    rc.chaotic_r.assign(cfg.chaotic_r, cfg.chaotic_r + cfg.n_chaotic);
  }
  if (cfg.regular_r && cfg.n_regular > 0) {
    rc.regular_r.assign(cfg.regular_r, cfg.regular_r + cfg.n_regular);
  }
  rc.windowing = {cfg.nl, cfg.shift, cfg.windows_per_r};
  rc.intervals_per_r = cfg.intervals_per_r;
  rc.avg_n = cfg.avg_n;
  rc.hr = to_core(cfg.hr);
  return rc;
}

chaos::predictor predictor_of(const cs_characterize_config& cfg) {
  if (cfg.kind == CS_PREDICTOR_FUZZYEN) {
    chaos::fuzzyen_params fe = to_core(cfg.fe);
    return [fe](std::span<const double> w) { return chaos::fuzzy_en(w, fe).value; };
  }
  if (!cfg.model) throw chaos::error(chaos::errc::invalid_argument, "model predictor needs a model");
  const chaos::mlp_model* m = &cfg.model->m;
  double shift = cfg.normalize_mean;
  return [m, shift](std::span<const double> w) {
    std::vector<double> shifted(w.begin(), w.end());
    for (double& v : shifted) v -= shift;
    return chaos::forward(*m, shifted);
  };
}

}  // namespace

extern "C" {

const char* cs_status_name(cs_status s) {
  switch (s) {
    case CS_OK: return "ok";
    case CS_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case CS_ERR_NUMERIC: return "numeric";
    case CS_ERR_STEP_CAP: return "step_cap";
    case CS_ERR_TOO_SHORT: return "too_short";
    case CS_ERR_IO: return "io";
    case CS_ERR_FORMAT: return "format";
    case CS_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* cs_last_error(void) { return g_last_error.c_str(); }

const char* cs_version(void) { return "1.0.0"; }

void cs_buffer_free(void* p) { std::free(p); }

void cs_hr_params_init(cs_hr_params* p) {
  if (!p) return;
  chaos::hr_params d;
  *p = {d.r, d.i_ex, d.x0, d.y0, d.z0, d.dt, d.t_transient, d.target_intervals,
        d.spike_threshold, d.max_steps};
}

cs_status cs_simulate(const cs_hr_params* p, int keep_trajectory, cs_simulation** out) {
  if (cs_status s = require(p && out, "null argument"); s != CS_OK) return s;
  return guarded([&] {
    auto sim = std::make_unique<cs_simulation>();
    chaos::hr_params cp = to_core(*p);
    if (keep_trajectory) {
      sim->traj = chaos::integrate(cp);
      sim->has_trajectory = true;
      auto spikes = chaos::detect_spikes(sim->traj, cp.spike_threshold, cp.t_transient);
      sim->intervals = chaos::intervals(spikes);
      if (sim->intervals.size() > cp.target_intervals) {
        sim->intervals.resize(cp.target_intervals);
      }
    } else {
      sim->intervals = chaos::run_intervals(cp);
    }
    *out = sim.release();
  });
}

void cs_simulation_free(cs_simulation* s) { delete s; }

size_t cs_simulation_interval_count(const cs_simulation* s) {
  return s ? s->intervals.size() : 0;
}

cs_status cs_simulation_intervals(const cs_simulation* s, double* out, size_t capacity) {
  if (cs_status st = require(s && out, "null argument"); st != CS_OK) return st;
  if (cs_status st = require(capacity >= s->intervals.size(), "buffer too small"); st != CS_OK)
    return st;
  std::memcpy(out, s->intervals.data(), s->intervals.size() * sizeof(double));
  return CS_OK;
}

cs_status cs_simulation_write_intervals_csv(const cs_simulation* s, const char* path) {
  if (cs_status st = require(s && path, "null argument"); st != CS_OK) return st;
  return guarded([&] { chaos::csv::atomic_write_text(path, chaos::intervals_csv(s->intervals)); });
}

cs_status cs_simulation_write_trajectory_csv(const cs_simulation* s, const char* path) {
  if (cs_status st = require(s && path, "null argument"); st != CS_OK) return st;
  if (cs_status st = require(s->has_trajectory, "simulation did not keep its trajectory");
      st != CS_OK)
    return st;
  return guarded([&] { chaos::csv::atomic_write_text(path, chaos::trajectory_csv(s->traj)); });
}

cs_status cs_bifurcation_csv(const cs_hr_params* tmpl, double i_ex, double r_min, double r_max,
                             size_t n_r, size_t intervals_per_r, const char* path,
                             size_t* failures) {
  if (cs_status st = require(tmpl && path, "null argument"); st != CS_OK) return st;
  if (cs_status st = require(n_r >= 1, "n_r must be >= 1"); st != CS_OK) return st;
  if (cs_status st = require(r_min < r_max || n_r == 1, "r_min must be below r_max"); st != CS_OK)
    return st;
  return guarded([&] {
    std::vector<double> grid(n_r);
    for (size_t i = 0; i < n_r; ++i) {
      grid[i] = n_r == 1 ? r_min
                         : r_min + (r_max - r_min) * static_cast<double>(i) /
                                       static_cast<double>(n_r - 1);
    }
    auto result = chaos::bifurcation_scan(i_ex, grid, intervals_per_r, to_core(*tmpl));
    std::ostringstream ss;
    ss << "r,interval\n";
    for (const auto& row : result.rows) {
      for (double v : row.intervals) {
        ss << chaos::csv::format_double(row.r, 15) << ',' << chaos::csv::format_double(v, 15)
           << '\n';
      }
    }
    chaos::csv::atomic_write_text(path, ss.str());
    if (failures) *failures = result.failures.size();
    if (!result.failures.empty()) {
      set_error("r=" + chaos::csv::format_double(result.failures.back().first, 12) + ": " +
                result.failures.back().second);
    }
  });
}

void cs_fuzzyen_params_init(cs_fuzzyen_params* p) {
  if (!p) return;
  chaos::fuzzyen_params d;
  *p = {d.m, d.r2, d.r1, d.r1_relative ? 1 : 0};
}

cs_status cs_fuzzy_entropy(const double* series, size_t n, const cs_fuzzyen_params* p,
                           double* value, int* degenerate, size_t* clamp_count) {
  if (cs_status st = require(series && p && value, "null argument"); st != CS_OK) return st;
  return guarded([&] {
    auto res = chaos::fuzzy_en(std::span<const double>(series, n), to_core(*p));
    *value = res.value;
    if (degenerate) *degenerate = res.degenerate ? 1 : 0;
    if (clamp_count) *clamp_count = res.clamp_count;
  });
}

void cs_base_config_init(cs_base_config* cfg) {
  if (!cfg) return;
  chaos::base_config d;
  cfg->i_ex = d.i_ex;
  cfg->r_min = d.r_min;
  cfg->r_max = d.r_max;
  cfg->n_r = d.n_r;
  cfg->intervals_per_r = d.intervals_per_r;
  cfg->nl = d.windowing.nl;
  cfg->shift = d.windowing.shift;
  cfg->windows_per_r = d.windowing.count.value_or(100);
  cs_hr_params_init(&cfg->hr);
  cs_fuzzyen_params_init(&cfg->fe);
}

cs_status cs_dataset_build(const cs_base_config* cfg, cs_dataset** out) {
  if (cs_status st = require(cfg && out, "null argument"); st != CS_OK) return st;
  return guarded([&] {
    chaos::base_config c;
    c.i_ex = cfg->i_ex;
    c.r_min = cfg->r_min;
    c.r_max = cfg->r_max;
    c.n_r = cfg->n_r;
    c.intervals_per_r = cfg->intervals_per_r;
    c.windowing = {cfg->nl, cfg->shift, cfg->windows_per_r};
    c.hr = to_core(cfg->hr);
    c.fe = to_core(cfg->fe);
    auto ds = std::make_unique<cs_dataset>();
    ds->ds = chaos::build_base(c);
    *out = ds.release();
  });
}

cs_status cs_dataset_load(const char* path, cs_dataset** out) {
  if (cs_status st = require(path && out, "null argument"); st != CS_OK) return st;
  return guarded([&] {
    auto ds = std::make_unique<cs_dataset>();
    ds->ds = chaos::load_dataset(path);
    *out = ds.release();
  });
}

cs_status cs_dataset_save(const cs_dataset* ds, const char* path) {
  if (cs_status st = require(ds && path, "null argument"); st != CS_OK) return st;
  return guarded([&] { chaos::save_dataset(ds->ds, path); });
}

void cs_dataset_free(cs_dataset* ds) { delete ds; }

size_t cs_dataset_size(const cs_dataset* ds) { return ds ? ds->ds.size() : 0; }

size_t cs_dataset_window_len(const cs_dataset* ds) { return ds ? ds->ds.window_len() : 0; }

cs_status cs_dataset_get_stats(const cs_dataset* ds, cs_dataset_stats* out) {
  if (cs_status st = require(ds && out, "null argument"); st != CS_OK) return st;
  const auto& s = ds->ds.stats;
  *out = {s.mean, s.window_mean_min, s.window_mean_max, s.min_value, s.max_value};
  return CS_OK;
}

cs_status cs_dataset_window(const cs_dataset* ds, size_t i, double* values, size_t capacity,
                            double* target) {
  if (cs_status st = require(ds, "null argument"); st != CS_OK) return st;
  if (cs_status st = require(i < ds->ds.size(), "index out of range"); st != CS_OK) return st;
  const auto& w = ds->ds.windows[i];
  if (values) {
    if (cs_status st = require(capacity >= w.values.size(), "buffer too small"); st != CS_OK)
      return st;
    std::memcpy(values, w.values.data(), w.values.size() * sizeof(double));
  }
  if (target) *target = ds->ds.targets[i];
  return CS_OK;
}

cs_status cs_dataset_targets(const cs_dataset* ds, double* out, size_t capacity) {
  if (cs_status st = require(ds && out, "null argument"); st != CS_OK) return st;
  if (cs_status st = require(capacity >= ds->ds.targets.size(), "buffer too small"); st != CS_OK)
    return st;
  std::memcpy(out, ds->ds.targets.data(), ds->ds.targets.size() * sizeof(double));
  return CS_OK;
}

cs_status cs_dataset_normalize(cs_dataset* ds, double mean) {
  if (cs_status st = require(ds, "null argument"); st != CS_OK) return st;
  return guarded([&] { ds->ds = chaos::normalize(ds->ds, mean); });
}

cs_status cs_dataset_merge(const cs_dataset* a, const cs_dataset* b, cs_dataset** out) {
  if (cs_status st = require(a && b && out, "null argument"); st != CS_OK) return st;
  return guarded([&] {
    auto ds = std::make_unique<cs_dataset>();
    ds->ds = chaos::merge(a->ds, b->ds);
    *out = ds.release();
  });
}

cs_status cs_dataset_block_lengths(const cs_dataset* ds, size_t** out, size_t* n_blocks) {
  if (cs_status st = require(ds && out && n_blocks, "null argument"); st != CS_OK) return st;
  return guarded([&] {
    auto lens = chaos::block_lengths(ds->ds);
    size_t* p = static_cast<size_t*>(std::malloc(lens.size() * sizeof(size_t)));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, lens.data(), lens.size() * sizeof(size_t));
    *out = p;
    *n_blocks = lens.size();
  });
}

cs_status cs_dataset_build_experimental(const cs_period_source* sources, size_t n_sources,
                                        size_t nl, const cs_fuzzyen_params* fe, cs_dataset** out,
                                        size_t* skipped) {
  if (cs_status st = require(sources && fe && out, "null argument"); st != CS_OK) return st;
  return guarded([&] {
    std::vector<chaos::period_source> srcs;
    srcs.reserve(n_sources);
    for (size_t i = 0; i < n_sources; ++i) {
      chaos::period_source s;
      s.tag = sources[i].tag ? sources[i].tag : "";
      s.values.assign(sources[i].values, sources[i].values + sources[i].n);
      srcs.push_back(std::move(s));
    }
    chaos::windowing_config wc{nl, 1, std::nullopt};
    auto res = chaos::build_experimental(srcs, wc, to_core(*fe));
    if (skipped) *skipped = res.skipped.size();
    auto ds = std::make_unique<cs_dataset>();
    ds->ds = std::move(res.ds);
    *out = ds.release();
  });
}

cs_status cs_lowpass(double* samples, size_t n, double sample_rate, double cutoff_hz) {
  if (cs_status st = require(samples, "null argument"); st != CS_OK) return st;
  return guarded([&] {
    chaos::waveform w{std::vector<double>(samples, samples + n), sample_rate};
    w = chaos::lowpass(w, cutoff_hz);
    std::memcpy(samples, w.samples.data(), n * sizeof(double));
  });
}

cs_status cs_extract_peaks(const double* samples, size_t n, double sample_rate,
                           double height_fraction, size_t local_points, double** times,
                           size_t* n_peaks) {
  if (cs_status st = require(samples && times && n_peaks, "null argument"); st != CS_OK) return st;
  return guarded([&] {
    chaos::waveform w{std::vector<double>(samples, samples + n), sample_rate};
    auto spikes = chaos::extract_peaks(w, height_fraction, local_points);
    *times = copy_out(spikes.times);
    *n_peaks = spikes.times.size();
  });
}

void cs_train_config_init(cs_train_config* cfg) {
  if (!cfg) return;
  chaos::train_config d;
  *cfg = {d.seed, d.epochs, d.learning_rate, d.batch_size, d.l2, d.shuffle ? 1 : 0};
}

cs_status cs_train(const cs_dataset* ds, size_t nh, const cs_train_config* cfg, cs_model** out) {
  if (cs_status st = require(ds && cfg && out, "null argument"); st != CS_OK) return st;
  return guarded([&] {
    auto m = std::make_unique<cs_model>();
    m->m = chaos::train(ds->ds, nh, to_core(*cfg));
    *out = m.release();
  });
}

cs_status cs_model_load(const char* path, cs_model** out) {
  if (cs_status st = require(path && out, "null argument"); st != CS_OK) return st;
  return guarded([&] {
    auto m = std::make_unique<cs_model>();
    m->m = chaos::load_model(path);
    *out = m.release();
  });
}

cs_status cs_model_save(const cs_model* m, const char* path) {
  if (cs_status st = require(m && path, "null argument"); st != CS_OK) return st;
  return guarded([&] { chaos::save_model(m->m, path); });
}

void cs_model_free(cs_model* m) { delete m; }

size_t cs_model_nl(const cs_model* m) { return m ? m->m.nl : 0; }

size_t cs_model_nh(const cs_model* m) { return m ? m->m.nh : 0; }

cs_status cs_model_forward(const cs_model* m, const double* window, size_t n, double* out) {
  if (cs_status st = require(m && window && out, "null argument"); st != CS_OK) return st;
  return guarded([&] { *out = chaos::forward(m->m, std::span<const double>(window, n)); });
}

cs_status cs_model_simplify_equal_weights(const cs_model* m, cs_model** out) {
  if (cs_status st = require(m && out, "null argument"); st != CS_OK) return st;
  return guarded([&] {
    auto s = std::make_unique<cs_model>();
    s->m = chaos::simplify_equal_weights(m->m);
    *out = s.release();
  });
}

cs_status cs_compute_metrics(const double* targets, const double* predictions, size_t n,
                             cs_metrics* out) {
  if (cs_status st = require(targets && predictions && out, "null argument"); st != CS_OK)
    return st;
  return guarded([&] {
    std::span<const double> t(targets, n), p(predictions, n);
    *out = {chaos::r2_score(t, p), chaos::rmse(t, p), chaos::mape_percent(t, p)};
  });
}

cs_status cs_kfold_cv(const cs_dataset* ds, size_t k, size_t nh, const cs_train_config* cfg,
                      cs_cv_result** out) {
  if (cs_status st = require(ds && cfg && out, "null argument"); st != CS_OK) return st;
  return guarded([&] {
    auto r = std::make_unique<cs_cv_result>();
    r->r = chaos::kfold_cv(ds->ds, k, nh, to_core(*cfg));
    *out = r.release();
  });
}

void cs_cv_result_free(cs_cv_result* r) { delete r; }

size_t cs_cv_result_folds(const cs_cv_result* r) { return r ? r->r.report.per_fold.size() : 0; }

cs_status cs_cv_result_fold_metrics(const cs_cv_result* r, size_t fold, cs_metrics* out) {
  if (cs_status st = require(r && out, "null argument"); st != CS_OK) return st;
  if (cs_status st = require(fold < r->r.report.per_fold.size(), "fold out of range");
      st != CS_OK)
    return st;
  *out = to_c(r->r.report.per_fold[fold]);
  return CS_OK;
}

cs_status cs_cv_result_aggregate(const cs_cv_result* r, cs_metrics* out) {
  if (cs_status st = require(r && out, "null argument"); st != CS_OK) return st;
  *out = to_c(r->r.report.aggregate);
  return CS_OK;
}

cs_status cs_cv_result_predictions(const cs_cv_result* r, double* out, size_t capacity) {
  if (cs_status st = require(r && out, "null argument"); st != CS_OK) return st;
  if (cs_status st = require(capacity >= r->r.predictions.size(), "buffer too small");
      st != CS_OK)
    return st;
  std::memcpy(out, r->r.predictions.data(), r->r.predictions.size() * sizeof(double));
  return CS_OK;
}

cs_status cs_cross_base(const cs_dataset* train_ds, const cs_dataset* test_ds, size_t nh,
                        const cs_train_config* cfg, cs_metrics* out, double* predictions) {
  if (cs_status st = require(train_ds && test_ds && cfg && out, "null argument"); st != CS_OK)
    return st;
  return guarded([&] {
    auto res = chaos::cross_base(train_ds->ds, test_ds->ds, nh, to_core(*cfg));
    *out = to_c(res.metrics);
    if (predictions) {
      std::memcpy(predictions, res.predictions.data(), res.predictions.size() * sizeof(double));
    }
  });
}

cs_status cs_average_over_n(const double* values, size_t n_values, size_t n,
                            const size_t* block_lens, size_t n_blocks, double* out) {
  if (cs_status st = require(values && out, "null argument"); st != CS_OK) return st;
  return guarded([&] {
    std::span<const std::size_t> blocks;
    if (block_lens && n_blocks > 0) blocks = {block_lens, n_blocks};
    auto avg = chaos::averaging_over_n(std::span<const double>(values, n_values), n, blocks);
    std::memcpy(out, avg.data(), avg.size() * sizeof(double));
  });
}

void cs_characterize_config_init(cs_characterize_config* cfg) {
  if (!cfg) return;
  std::memset(cfg, 0, sizeof(*cfg));
  cfg->kind = CS_PREDICTOR_FUZZYEN;
  cs_fuzzyen_params_init(&cfg->fe);
  cfg->model = nullptr;
  cfg->normalize_mean = 0.0;
  cfg->i_ex = 3.25;
  cfg->chaotic_r = nullptr;
  cfg->n_chaotic = 0;
  cfg->regular_r = nullptr;
  cfg->n_regular = 0;
  cfg->nl = 50;
  cfg->shift = 4;
  cfg->windows_per_r = 100;
  cfg->intervals_per_r = 500;
  cfg->avg_n = 1;
  cs_hr_params_init(&cfg->hr);
}

void cs_default_regimes(const double** chaotic_r, size_t* n_chaotic, const double** regular_r,
                        size_t* n_regular) {
  if (chaotic_r) *chaotic_r = kChaoticR;
  if (n_chaotic) *n_chaotic = 5;
  if (regular_r) *regular_r = kRegularR;
  if (n_regular) *n_regular = 5;
}

cs_status cs_characterize(const cs_characterize_config* cfg, cs_sensor_chars* out) {
  if (cs_status st = require(cfg && out, "null argument"); st != CS_OK) return st;
  return guarded([&] { *out = to_c(chaos::characterize(predictor_of(*cfg), regimes_of(*cfg))); });
}

cs_status cs_length_study(const size_t* nl_values, size_t n_nl, const cs_characterize_config* cfg,
                          cs_sensor_chars* out) {
  if (cs_status st = require(nl_values && cfg && out, "null argument"); st != CS_OK) return st;
  return guarded([&] {
    auto rows = chaos::length_study(std::span<const std::size_t>(nl_values, n_nl),
                                    regimes_of(*cfg), to_core(cfg->fe));
    for (size_t i = 0; i < rows.size(); ++i) out[i] = to_c(rows[i].chars);
  });
}

cs_status cs_write_text_file(const char* path, const char* content) {
  if (cs_status st = require(path && content, "null argument"); st != CS_OK) return st;
  return guarded([&] { chaos::csv::atomic_write_text(path, content); });
}

cs_status cs_read_csv_column(const char* path, const char* column, double** out, size_t* n) {
  if (cs_status st = require(path && out && n, "null argument"); st != CS_OK) return st;
  return guarded([&] {
    auto vals = chaos::csv::read_column(path, column ? column : "");
    *out = copy_out(vals);
    *n = vals.size();
  });
}

cs_status cs_read_waveform_csv(const char* path, double** samples, size_t* n,
                               double* sample_rate) {
  if (cs_status st = require(path && samples && n && sample_rate, "null argument"); st != CS_OK)
    return st;
  return guarded([&] {
    auto rows = chaos::csv::read_rows(path);
    if (rows.empty()) throw chaos::error(chaos::errc::format, "empty waveform file");
    bool header = false;
    for (const auto& f : rows[0]) {
      if (!chaos::csv::looks_numeric(f)) header = true;
    }
    size_t t_col = 0, v_col = rows[0].size() > 1 ? 1 : 0;
    if (header) {
      for (size_t i = 0; i < rows[0].size(); ++i) {
        if (rows[0][i] == "t" || rows[0][i] == "time") t_col = i;
        if (rows[0][i] == "v" || rows[0][i] == "voltage") v_col = i;
      }
    }
    if (rows[0].size() < 2) {
      throw chaos::error(chaos::errc::format, "waveform needs t and v columns");
    }
    std::vector<double> t, v;
    for (size_t r = header ? 1 : 0; r < rows.size(); ++r) {
      if (rows[r].size() != rows[0].size()) {
        throw chaos::error(chaos::errc::format, "ragged row " + std::to_string(r));
      }
      t.push_back(chaos::csv::parse_double(rows[r][t_col]));
      v.push_back(chaos::csv::parse_double(rows[r][v_col]));
    }
    if (t.size() < 2) throw chaos::error(chaos::errc::format, "waveform needs >= 2 samples");
    double span = t.back() - t.front();
    if (!(span > 0.0)) throw chaos::error(chaos::errc::format, "time column must increase");
    *sample_rate = static_cast<double>(t.size() - 1) / span;
    *samples = copy_out(v);
    *n = v.size();
  });
}

}  // extern "C"
