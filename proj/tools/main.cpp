// Command-line front end of the chaos sensor toolkit. Every command resolves
// its full configuration up front, echoes it to stderr for provenance, and
// writes plot-ready CSV output. Exit codes: 0 success, 1 runtime failure,
// 2 usage error.
#include <chaos_sensor.h>

#include <CLI11.hpp>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct free_deleter {
  void operator()(void* p) const { cs_buffer_free(p); }
};
using buffer = std::unique_ptr<double[], free_deleter>;
using size_buffer = std::unique_ptr<size_t[], free_deleter>;

int runtime_fail(cs_status st) {
  std::fprintf(stderr, "error: %s: %s\n", cs_status_name(st), cs_last_error());
  return 1;
}

int usage_fail(const std::string& msg) {
  std::fprintf(stderr, "error: usage: %s\n", msg.c_str());
  return 2;
}

#define CS_CHECK(call)                               \
  do {                                               \
    cs_status cs_check_st = (call);                  \
    if (cs_check_st != CS_OK) return runtime_fail(cs_check_st); \
  } while (0)

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Effective-configuration echo, one line per run.
class provenance {
public:
  explicit provenance(const std::string& command) { ss_ << "# " << command; }
  provenance& kv(const std::string& key, const std::string& v) {
    ss_ << ' ' << key << '=' << (v.empty() ? "-" : v);
    return *this;
  }
  provenance& kv(const std::string& key, double v) { return kv(key, fmt(v)); }
  provenance& kv(const std::string& key, size_t v) { return kv(key, std::to_string(v)); }
  void print() const { std::fprintf(stderr, "%s\n", ss_.str().c_str()); }

private:
  std::ostringstream ss_;
};

std::vector<double> parse_list(const std::string& csv_list) {
  std::vector<double> out;
  std::stringstream ss(csv_list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::strtod(item.c_str(), nullptr));
  }
  return out;
}

// Shared flag bundles ------------------------------------------------------

struct hr_flags {
  cs_hr_params p;
  void add(CLI::App* cmd, bool with_r) {
    cs_hr_params_init(&p);
    if (with_r) cmd->add_option("--r", p.r, "slow-current parameter")->check(CLI::PositiveNumber);
    cmd->add_option("--i-ex", p.i_ex, "external current");
    cmd->add_option("--dt", p.dt, "integration step")->check(CLI::PositiveNumber);
    cmd->add_option("--transient", p.t_transient, "discarded initial span")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--threshold", p.spike_threshold, "spike detection level");
    cmd->add_option("--x0", p.x0, "initial x");
    cmd->add_option("--y0", p.y0, "initial y");
    cmd->add_option("--z0", p.z0, "initial z");
    cmd->add_option("--max-steps", p.max_steps, "integration step cap");
  }
};

struct fe_flags {
  cs_fuzzyen_params p;
  std::string r1_mode = "relative";
  void add(CLI::App* cmd) {
    cs_fuzzyen_params_init(&p);
    cmd->add_option("--m", p.m, "embedding dimension")->check(CLI::PositiveNumber);
    cmd->add_option("--r2", p.r2, "fuzzy exponent")->check(CLI::PositiveNumber);
    cmd->add_option("--r1", p.r1, "tolerance (absolute, or factor x std)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--r1-mode", r1_mode, "relative|absolute")
        ->check(CLI::IsMember({"relative", "absolute"}));
  }
  void resolve() { p.r1_relative = r1_mode == "relative" ? 1 : 0; }
};

struct train_flags {
  cs_train_config cfg;
  bool no_shuffle = false;
  std::string normalize = "none";  // none | auto | <number>
  void add(CLI::App* cmd) {
    cs_train_config_init(&cfg);
    cmd->add_option("--seed", cfg.seed, "RNG seed")->required();
    cmd->add_option("--epochs", cfg.epochs, "training epochs")->check(CLI::PositiveNumber);
    cmd->add_option("--lr", cfg.learning_rate, "learning rate")->check(CLI::PositiveNumber);
    cmd->add_option("--batch", cfg.batch_size, "mini-batch size")->check(CLI::PositiveNumber);
    cmd->add_option("--l2", cfg.l2, "decoupled weight decay")->check(CLI::NonNegativeNumber);
    cmd->add_flag("--no-shuffle", no_shuffle, "keep sample order within epochs");
    cmd->add_option("--normalize", normalize,
                    "subtract a mean from window elements: none, auto, or a value");
  }
  void resolve() { cfg.shuffle = no_shuffle ? 0 : 1; }
};

// Applies the --normalize policy; reports the mean used through `used`.
int apply_normalize(cs_dataset* ds, const std::string& mode, double* used) {
  *used = 0.0;
  if (mode == "none") return 0;
  double mean = 0.0;
  if (mode == "auto") {
    cs_dataset_stats st;
    CS_CHECK(cs_dataset_get_stats(ds, &st));
    mean = st.mean;
  } else {
    char* end = nullptr;
    mean = std::strtod(mode.c_str(), &end);
    if (end == mode.c_str() || *end != '\0') {
      return usage_fail("--normalize expects none, auto, or a number");
    }
  }
  CS_CHECK(cs_dataset_normalize(ds, mean));
  *used = mean;
  return 0;
}

struct dataset_handle {
  cs_dataset* ds = nullptr;
  ~dataset_handle() { cs_dataset_free(ds); }
};

struct model_handle {
  cs_model* m = nullptr;
  ~model_handle() { cs_model_free(m); }
};

struct cv_handle {
  cs_cv_result* r = nullptr;
  ~cv_handle() { cs_cv_result_free(r); }
};

struct sim_handle {
  cs_simulation* s = nullptr;
  ~sim_handle() { cs_simulation_free(s); }
};

int load_and_normalize(const std::string& path, const std::string& normalize, dataset_handle& h,
                       double* mean_used) {
  CS_CHECK(cs_dataset_load(path.c_str(), &h.ds));
  return apply_normalize(h.ds, normalize, mean_used);
}

// Window rows for `predict`: a dataset CSV or bare numeric rows.
int read_windows(const std::string& path, std::vector<std::vector<double>>& rows_out) {
  cs_dataset* ds = nullptr;
  if (cs_dataset_load(path.c_str(), &ds) == CS_OK) {
    dataset_handle h{ds};
    size_t n = cs_dataset_size(ds), nl = cs_dataset_window_len(ds);
    rows_out.assign(n, std::vector<double>(nl));
    for (size_t i = 0; i < n; ++i) {
      CS_CHECK(cs_dataset_window(ds, i, rows_out[i].data(), nl, nullptr));
    }
    return 0;
  }
  std::FILE* f = std::fopen(path.c_str(), "r");
  if (!f) return runtime_fail(CS_ERR_IO);
  char line[1 << 16];
  bool first = true;
  while (std::fgets(line, sizeof(line), f)) {
    std::vector<double> vals;
    char* tok = std::strtok(line, ",\r\n");
    bool numeric = true;
    while (tok) {
      char* end = nullptr;
      double v = std::strtod(tok, &end);
      if (end == tok || *end != '\0') {
        numeric = false;
        break;
      }
      vals.push_back(v);
      tok = std::strtok(nullptr, ",\r\n");
    }
    if (!numeric) {
      if (first) {  // header row
        first = false;
        continue;
      }
      std::fclose(f);
      std::fprintf(stderr, "error: format: non-numeric window row in %s\n", path.c_str());
      return 1;
    }
    first = false;
    if (!vals.empty()) rows_out.push_back(std::move(vals));
  }
  std::fclose(f);
  return 0;
}

// Commands -----------------------------------------------------------------

int cmd_simulate(const hr_flags& hr, size_t n, const std::string& out,
                 const std::string& traj_out) {
  provenance("simulate")
      .kv("r", hr.p.r)
      .kv("i_ex", hr.p.i_ex)
      .kv("dt", hr.p.dt)
      .kv("transient", hr.p.t_transient)
      .kv("threshold", hr.p.spike_threshold)
      .kv("n", n)
      .kv("out", out)
      .kv("trajectory", traj_out)
      .print();
  if (n == 0) {
    CS_CHECK(cs_write_text_file(out.c_str(), "index,interval\n"));
    return 0;
  }
  cs_hr_params p = hr.p;
  p.target_intervals = n;
  sim_handle sim;
  CS_CHECK(cs_simulate(&p, traj_out.empty() ? 0 : 1, &sim.s));
  CS_CHECK(cs_simulation_write_intervals_csv(sim.s, out.c_str()));
  if (!traj_out.empty()) {
    CS_CHECK(cs_simulation_write_trajectory_csv(sim.s, traj_out.c_str()));
  }
  return 0;
}

int cmd_bifurcate(const hr_flags& hr, double r_min, double r_max, size_t n_r, size_t per_r,
                  const std::string& out) {
  if (!(r_min < r_max)) return usage_fail("--r-min must be below --r-max");
  provenance("bifurcate")
      .kv("i_ex", hr.p.i_ex)
      .kv("r_min", r_min)
      .kv("r_max", r_max)
      .kv("n_r", n_r)
      .kv("per_r", per_r)
      .kv("dt", hr.p.dt)
      .kv("transient", hr.p.t_transient)
      .kv("out", out)
      .print();
  size_t failures = 0;
  CS_CHECK(cs_bifurcation_csv(&hr.p, hr.p.i_ex, r_min, r_max, n_r, per_r, out.c_str(), &failures));
  if (failures > 0) {
    std::fprintf(stderr, "warning: %zu of %zu r values failed; last: %s\n", failures, n_r,
                 cs_last_error());
  }
  return 0;
}

int cmd_dataset_build(const cs_base_config& cfg, const std::string& out) {
  provenance("dataset build")
      .kv("i_ex", cfg.i_ex)
      .kv("r_min", cfg.r_min)
      .kv("r_max", cfg.r_max)
      .kv("n_r", cfg.n_r)
      .kv("intervals", cfg.intervals_per_r)
      .kv("nl", cfg.nl)
      .kv("shift", cfg.shift)
      .kv("count", cfg.windows_per_r)
      .kv("m", cfg.fe.m)
      .kv("r2", cfg.fe.r2)
      .kv("r1", cfg.fe.r1)
      .kv("r1_mode", cfg.fe.r1_relative ? "relative" : "absolute")
      .kv("out", out)
      .print();
  dataset_handle h;
  CS_CHECK(cs_dataset_build(&cfg, &h.ds));
  cs_dataset_stats st;
  CS_CHECK(cs_dataset_get_stats(h.ds, &st));
  std::fprintf(stderr,
               "windows=%zu mean=%s window_mean_min=%s window_mean_max=%s min=%s max=%s\n",
               cs_dataset_size(h.ds), fmt(st.mean).c_str(), fmt(st.window_mean_min).c_str(),
               fmt(st.window_mean_max).c_str(), fmt(st.min_value).c_str(),
               fmt(st.max_value).c_str());
  CS_CHECK(cs_dataset_save(h.ds, out.c_str()));
  return 0;
}

int cmd_dataset_merge(const std::string& a, const std::string& b, const std::string& out) {
  provenance("dataset merge").kv("a", a).kv("b", b).kv("out", out).print();
  dataset_handle ha, hb, hm;
  CS_CHECK(cs_dataset_load(a.c_str(), &ha.ds));
  CS_CHECK(cs_dataset_load(b.c_str(), &hb.ds));
  CS_CHECK(cs_dataset_merge(ha.ds, hb.ds, &hm.ds));
  CS_CHECK(cs_dataset_save(hm.ds, out.c_str()));
  return 0;
}

int cmd_dataset_normalize(const std::string& in, const std::string& mean_spec,
                          const std::string& out) {
  provenance("dataset normalize").kv("in", in).kv("mean", mean_spec).kv("out", out).print();
  dataset_handle h;
  double used = 0.0;
  if (int rc = load_and_normalize(in, mean_spec, h, &used); rc != 0) return rc;
  std::fprintf(stderr, "subtracted mean=%s\n", fmt(used).c_str());
  CS_CHECK(cs_dataset_save(h.ds, out.c_str()));
  return 0;
}

// file=tag specs for experimental sources.
int parse_source_spec(const std::string& spec, std::string& file, std::string& tag) {
  auto pos = spec.rfind('=');
  if (pos == std::string::npos || pos == 0) {
    return usage_fail("source spec must be <file>=<tag>: " + spec);
  }
  file = spec.substr(0, pos);
  tag = spec.substr(pos + 1);
  return 0;
}

int cmd_dataset_experimental(const std::vector<std::string>& period_specs,
                             const std::vector<std::string>& waveform_specs, size_t nl,
                             const fe_flags& fe, double cutoff, double height,
                             size_t local_points, const std::string& out) {
  if (period_specs.empty() && waveform_specs.empty()) {
    return usage_fail("need at least one --periods or --waveform source");
  }
  provenance("dataset experimental")
      .kv("periods", std::to_string(period_specs.size()))
      .kv("waveforms", std::to_string(waveform_specs.size()))
      .kv("nl", nl)
      .kv("shift", size_t{1})
      .kv("cutoff_hz", cutoff)
      .kv("height", height)
      .kv("local_points", local_points)
      .kv("out", out)
      .print();

  std::vector<std::string> tags;
  std::vector<std::vector<double>> series;
  for (const auto& spec : period_specs) {
    std::string file, tag;
    if (int rc = parse_source_spec(spec, file, tag); rc != 0) return rc;
    double* vals = nullptr;
    size_t n = 0;
    CS_CHECK(cs_read_csv_column(file.c_str(), "interval", &vals, &n));
    buffer owner(vals);
    tags.push_back(tag);
    series.emplace_back(vals, vals + n);
  }
  for (const auto& spec : waveform_specs) {
    std::string file, tag;
    if (int rc = parse_source_spec(spec, file, tag); rc != 0) return rc;
    double* samples = nullptr;
    size_t n = 0;
    double rate = 0.0;
    CS_CHECK(cs_read_waveform_csv(file.c_str(), &samples, &n, &rate));
    buffer owner(samples);
    if (cutoff > 0.0) CS_CHECK(cs_lowpass(samples, n, rate, cutoff));
    double* times = nullptr;
    size_t n_peaks = 0;
    CS_CHECK(cs_extract_peaks(samples, n, rate, height, local_points, &times, &n_peaks));
    buffer times_owner(times);
    std::vector<double> periods;
    for (size_t i = 1; i < n_peaks; ++i) periods.push_back(times[i] - times[i - 1]);
    tags.push_back(tag);
    series.push_back(std::move(periods));
  }

  std::vector<cs_period_source> sources;
  for (size_t i = 0; i < tags.size(); ++i) {
    sources.push_back({tags[i].c_str(), series[i].data(), series[i].size()});
  }
  fe_flags fe_resolved = fe;
  fe_resolved.resolve();
  dataset_handle h;
  size_t skipped = 0;
  CS_CHECK(cs_dataset_build_experimental(sources.data(), sources.size(), nl, &fe_resolved.p,
                                         &h.ds, &skipped));
  if (skipped > 0) {
    std::fprintf(stderr, "warning: %zu sources shorter than one window were skipped\n", skipped);
  }
  std::fprintf(stderr, "windows=%zu\n", cs_dataset_size(h.ds));
  CS_CHECK(cs_dataset_save(h.ds, out.c_str()));
  return 0;
}

int cmd_entropy(const std::string& in, const std::string& column, fe_flags fe) {
  fe.resolve();
  provenance("entropy")
      .kv("in", in)
      .kv("column", column)
      .kv("m", fe.p.m)
      .kv("r2", fe.p.r2)
      .kv("r1", fe.p.r1)
      .kv("r1_mode", fe.p.r1_relative ? "relative" : "absolute")
      .print();
  double* vals = nullptr;
  size_t n = 0;
  CS_CHECK(cs_read_csv_column(in.c_str(), column.c_str(), &vals, &n));
  buffer owner(vals);
  double value = 0.0;
  int degenerate = 0;
  size_t clamps = 0;
  CS_CHECK(cs_fuzzy_entropy(vals, n, &fe.p, &value, &degenerate, &clamps));
  if (degenerate) std::fprintf(stderr, "warning: constant series; entropy fixed at 0\n");
  if (clamps > 0) std::fprintf(stderr, "warning: %zu phi value(s) clamped before log\n", clamps);
  std::printf("%.12g\n", value);
  return 0;
}

int cmd_train(const std::string& data, size_t nh, train_flags tf, const std::string& out) {
  tf.resolve();
  provenance("train")
      .kv("data", data)
      .kv("nh", nh)
      .kv("seed", tf.cfg.seed)
      .kv("epochs", tf.cfg.epochs)
      .kv("lr", tf.cfg.learning_rate)
      .kv("batch", tf.cfg.batch_size)
      .kv("l2", tf.cfg.l2)
      .kv("shuffle", tf.cfg.shuffle ? "yes" : "no")
      .kv("normalize", tf.normalize)
      .kv("out", out)
      .print();
  dataset_handle h;
  double mean_used = 0.0;
  if (int rc = load_and_normalize(data, tf.normalize, h, &mean_used); rc != 0) return rc;
  model_handle m;
  CS_CHECK(cs_train(h.ds, nh, &tf.cfg, &m.m));
  CS_CHECK(cs_model_save(m.m, out.c_str()));
  std::fprintf(stderr, "trained nl=%zu nh=%zu on %zu windows (normalize mean=%s)\n",
               cs_model_nl(m.m), cs_model_nh(m.m), cs_dataset_size(h.ds), fmt(mean_used).c_str());
  return 0;
}

int cmd_cv(const std::string& data, size_t k, size_t nh, train_flags tf, const std::string& out,
           const std::string& predictions_out, const std::string& trace_out, size_t avg_n) {
  tf.resolve();
  provenance("cv")
      .kv("data", data)
      .kv("k", k)
      .kv("nh", nh)
      .kv("seed", tf.cfg.seed)
      .kv("epochs", tf.cfg.epochs)
      .kv("lr", tf.cfg.learning_rate)
      .kv("batch", tf.cfg.batch_size)
      .kv("l2", tf.cfg.l2)
      .kv("shuffle", tf.cfg.shuffle ? "yes" : "no")
      .kv("normalize", tf.normalize)
      .kv("avg", avg_n)
      .kv("out", out)
      .kv("predictions", predictions_out)
      .kv("trace", trace_out)
      .print();
  dataset_handle h;
  double mean_used = 0.0;
  if (int rc = load_and_normalize(data, tf.normalize, h, &mean_used); rc != 0) return rc;

  cv_handle cv;
  CS_CHECK(cs_kfold_cv(h.ds, k, nh, &tf.cfg, &cv.r));

  std::ostringstream report;
  report << "fold,r2,rmse,mape_percent\n";
  for (size_t f = 0; f < cs_cv_result_folds(cv.r); ++f) {
    cs_metrics m;
    CS_CHECK(cs_cv_result_fold_metrics(cv.r, f, &m));
    report << f << ',' << fmt(m.r2) << ',' << fmt(m.rmse) << ',' << fmt(m.mape_percent) << '\n';
  }
  cs_metrics agg;
  CS_CHECK(cs_cv_result_aggregate(cv.r, &agg));
  report << "aggregate," << fmt(agg.r2) << ',' << fmt(agg.rmse) << ',' << fmt(agg.mape_percent)
         << '\n';
  CS_CHECK(cs_write_text_file(out.c_str(), report.str().c_str()));
  std::fprintf(stderr, "aggregate r2=%s rmse=%s mape=%s%%\n", fmt(agg.r2).c_str(),
               fmt(agg.rmse).c_str(), fmt(agg.mape_percent).c_str());

  size_t n = cs_dataset_size(h.ds);
  std::vector<double> preds(n), targets(n);
  CS_CHECK(cs_cv_result_predictions(cv.r, preds.data(), n));
  CS_CHECK(cs_dataset_targets(h.ds, targets.data(), n));

  if (!predictions_out.empty()) {
    std::ostringstream ss;
    ss << "index,target,prediction\n";
    for (size_t i = 0; i < n; ++i) {
      ss << i << ',' << fmt(targets[i]) << ',' << fmt(preds[i]) << '\n';
    }
    CS_CHECK(cs_write_text_file(predictions_out.c_str(), ss.str().c_str()));
  }
  if (!trace_out.empty()) {
    size_t* lens = nullptr;
    size_t n_blocks = 0;
    CS_CHECK(cs_dataset_block_lengths(h.ds, &lens, &n_blocks));
    size_buffer lens_owner(lens);
    std::vector<double> averaged(n);
    CS_CHECK(cs_average_over_n(preds.data(), n, avg_n, lens, n_blocks, averaged.data()));
    std::ostringstream ss;
    ss << "index,sfu,spe,spe_avg" << avg_n << "\n";
    for (size_t i = 0; i < n; ++i) {
      ss << i << ',' << fmt(targets[i]) << ',' << fmt(preds[i]) << ',' << fmt(averaged[i]) << '\n';
    }
    CS_CHECK(cs_write_text_file(trace_out.c_str(), ss.str().c_str()));
  }
  return 0;
}

int cmd_cross(const std::string& train_data, const std::string& test_data, size_t nh,
              train_flags tf, const std::string& out) {
  tf.resolve();
  provenance("cross")
      .kv("train", train_data)
      .kv("test", test_data)
      .kv("nh", nh)
      .kv("seed", tf.cfg.seed)
      .kv("epochs", tf.cfg.epochs)
      .kv("lr", tf.cfg.learning_rate)
      .kv("batch", tf.cfg.batch_size)
      .kv("l2", tf.cfg.l2)
      .kv("normalize", tf.normalize)
      .kv("out", out)
      .print();
  dataset_handle train_h, test_h;
  double mean_a = 0.0, mean_b = 0.0;
  if (int rc = load_and_normalize(train_data, tf.normalize, train_h, &mean_a); rc != 0) return rc;
  if (int rc = load_and_normalize(test_data, tf.normalize, test_h, &mean_b); rc != 0) return rc;
  cs_metrics m;
  CS_CHECK(cs_cross_base(train_h.ds, test_h.ds, nh, &tf.cfg, &m, nullptr));
  std::ostringstream ss;
  ss << "r2,rmse,mape_percent\n"
     << fmt(m.r2) << ',' << fmt(m.rmse) << ',' << fmt(m.mape_percent) << '\n';
  CS_CHECK(cs_write_text_file(out.c_str(), ss.str().c_str()));
  std::fprintf(stderr, "r2=%s rmse=%s mape=%s%%\n", fmt(m.r2).c_str(), fmt(m.rmse).c_str(),
               fmt(m.mape_percent).c_str());
  return 0;
}

std::string chars_csv_row(const cs_sensor_chars& c) {
  std::ostringstream ss;
  ss << fmt(c.en_av_order) << ',' << fmt(c.en_av_chaos) << ',' << fmt(c.en_r) << ','
     << fmt(c.std_en_order) << ',' << fmt(c.std_en_chaos) << ',' << fmt(c.en_sens) << ','
     << fmt(c.en_err_percent);
  return ss.str();
}

int cmd_characterize(const std::string& predictor_name, const std::string& model_path,
                     double normalize_mean, fe_flags fe, const hr_flags& hr, size_t nl,
                     size_t shift, size_t count, size_t intervals, size_t avg_n,
                     const std::string& chaotic_list, const std::string& regular_list,
                     const std::string& out) {
  fe.resolve();
  provenance("characterize")
      .kv("predictor", predictor_name)
      .kv("model", model_path)
      .kv("normalize_mean", normalize_mean)
      .kv("i_ex", hr.p.i_ex)
      .kv("nl", nl)
      .kv("shift", shift)
      .kv("count", count)
      .kv("intervals", intervals)
      .kv("avg", avg_n)
      .kv("chaotic_r", chaotic_list)
      .kv("regular_r", regular_list)
      .kv("out", out)
      .print();

  cs_characterize_config cfg;
  cs_characterize_config_init(&cfg);
  cfg.fe = fe.p;
  cfg.hr = hr.p;
  cfg.i_ex = hr.p.i_ex;
  cfg.nl = nl;
  cfg.shift = shift;
  cfg.windows_per_r = count;
  cfg.intervals_per_r = intervals;
  cfg.avg_n = avg_n;

  std::vector<double> chaotic = parse_list(chaotic_list);
  std::vector<double> regular = parse_list(regular_list);
  if (!chaotic.empty()) {
    cfg.chaotic_r = chaotic.data();
    cfg.n_chaotic = chaotic.size();
  }
  if (!regular.empty()) {
    cfg.regular_r = regular.data();
    cfg.n_regular = regular.size();
  }

  model_handle m;
  if (predictor_name == "spe") {
    if (model_path.empty()) return usage_fail("--predictor spe requires --model");
    CS_CHECK(cs_model_load(model_path.c_str(), &m.m));
    cfg.kind = CS_PREDICTOR_MODEL;
    cfg.model = m.m;
    cfg.normalize_mean = normalize_mean;
  }

  cs_sensor_chars chars;
  CS_CHECK(cs_characterize(&cfg, &chars));
  if (chars.degenerate) {
    std::fprintf(stderr, "warning: en_r is zero; en_sens and en_err are undefined\n");
  }
  std::string body =
      "en_av_order,en_av_chaos,en_r,std_en_order,std_en_chaos,en_sens,en_err_percent\n" +
      chars_csv_row(chars) + "\n";
  CS_CHECK(cs_write_text_file(out.c_str(), body.c_str()));
  std::fprintf(stderr, "%s\n", chars_csv_row(chars).c_str());
  return 0;
}

int cmd_lengthstudy(const std::string& nl_list, fe_flags fe, const hr_flags& hr, size_t shift,
                    size_t count, size_t intervals, const std::string& chaotic_list,
                    const std::string& regular_list, const std::string& out) {
  fe.resolve();
  provenance("lengthstudy")
      .kv("nl_list", nl_list)
      .kv("i_ex", hr.p.i_ex)
      .kv("shift", shift)
      .kv("count", count)
      .kv("intervals", intervals)
      .kv("out", out)
      .print();

  std::vector<size_t> nls;
  for (double v : parse_list(nl_list)) nls.push_back(static_cast<size_t>(v));
  if (nls.empty()) return usage_fail("--nl-list must name at least one length");

  cs_characterize_config cfg;
  cs_characterize_config_init(&cfg);
  cfg.fe = fe.p;
  cfg.hr = hr.p;
  cfg.i_ex = hr.p.i_ex;
  cfg.shift = shift;
  cfg.windows_per_r = count;
  cfg.intervals_per_r = intervals;
  std::vector<double> chaotic = parse_list(chaotic_list);
  std::vector<double> regular = parse_list(regular_list);
  if (!chaotic.empty()) {
    cfg.chaotic_r = chaotic.data();
    cfg.n_chaotic = chaotic.size();
  }
  if (!regular.empty()) {
    cfg.regular_r = regular.data();
    cfg.n_regular = regular.size();
  }

  std::vector<cs_sensor_chars> rows(nls.size());
  CS_CHECK(cs_length_study(nls.data(), nls.size(), &cfg, rows.data()));
  std::ostringstream ss;
  ss << "nl,en_av_order,en_av_chaos,en_r,std_en_order,std_en_chaos,en_sens,en_err_percent\n";
  for (size_t i = 0; i < nls.size(); ++i) {
    ss << nls[i] << ',' << chars_csv_row(rows[i]) << '\n';
  }
  CS_CHECK(cs_write_text_file(out.c_str(), ss.str().c_str()));
  return 0;
}

int cmd_peaks(const std::string& in, double cutoff, double height, size_t local_points,
              bool as_intervals, const std::string& out) {
  provenance("peaks")
      .kv("in", in)
      .kv("cutoff_hz", cutoff)
      .kv("height", height)
      .kv("local_points", local_points)
      .kv("intervals", as_intervals ? "yes" : "no")
      .kv("out", out)
      .print();
  double* samples = nullptr;
  size_t n = 0;
  double rate = 0.0;
  CS_CHECK(cs_read_waveform_csv(in.c_str(), &samples, &n, &rate));
  buffer owner(samples);
  std::fprintf(stderr, "samples=%zu sample_rate=%s\n", n, fmt(rate).c_str());
  if (cutoff > 0.0) CS_CHECK(cs_lowpass(samples, n, rate, cutoff));
  double* times = nullptr;
  size_t n_peaks = 0;
  CS_CHECK(cs_extract_peaks(samples, n, rate, height, local_points, &times, &n_peaks));
  buffer times_owner(times);
  std::ostringstream ss;
  if (as_intervals) {
    ss << "index,interval\n";
    for (size_t i = 1; i < n_peaks; ++i) ss << i - 1 << ',' << fmt(times[i] - times[i - 1]) << '\n';
  } else {
    ss << "index,time\n";
    for (size_t i = 0; i < n_peaks; ++i) ss << i << ',' << fmt(times[i]) << '\n';
  }
  CS_CHECK(cs_write_text_file(out.c_str(), ss.str().c_str()));
  std::fprintf(stderr, "peaks=%zu\n", n_peaks);
  return 0;
}

int cmd_predict(const std::string& model_path, const std::string& in, double normalize_mean,
                const std::string& out) {
  provenance("predict")
      .kv("model", model_path)
      .kv("in", in)
      .kv("normalize_mean", normalize_mean)
      .kv("out", out)
      .print();
  model_handle m;
  CS_CHECK(cs_model_load(model_path.c_str(), &m.m));
  std::vector<std::vector<double>> rows;
  if (int rc = read_windows(in, rows); rc != 0) return rc;
  std::ostringstream ss;
  ss << "index,prediction\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    for (double& v : rows[i]) v -= normalize_mean;
    double pred = 0.0;
    CS_CHECK(cs_model_forward(m.m, rows[i].data(), rows[i].size(), &pred));
    ss << i << ',' << fmt(pred) << '\n';
  }
  CS_CHECK(cs_write_text_file(out.c_str(), ss.str().c_str()));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hindmarsh-Rose chaos sensor toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file; flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);

  // simulate
  auto* sim = app.add_subcommand("simulate", "integrate the neuron model and emit intervals");
  hr_flags sim_hr;
  sim_hr.add(sim, true);
  size_t sim_n = 500;
  std::string sim_out, sim_traj;
  sim->add_option("--n", sim_n, "intervals to collect");
  sim->add_option("--out", sim_out, "interval CSV path")->required();
  sim->add_option("--trajectory", sim_traj, "also write the t,x,y,z path");

  // bifurcate
  auto* bif = app.add_subcommand("bifurcate", "interval scatter across an r grid");
  hr_flags bif_hr;
  bif_hr.add(bif, false);
  double bif_rmin = 5e-3, bif_rmax = 1.5e-2;
  size_t bif_nr = 100, bif_per = 100;
  std::string bif_out;
  bif->add_option("--r-min", bif_rmin, "grid start");
  bif->add_option("--r-max", bif_rmax, "grid end");
  bif->add_option("--n-r", bif_nr, "grid size")->check(CLI::PositiveNumber);
  bif->add_option("--per-r", bif_per, "intervals per r")->check(CLI::PositiveNumber);
  bif->add_option("--out", bif_out, "output CSV (r,interval)")->required();

  // dataset build|merge|normalize|experimental
  auto* ds = app.add_subcommand("dataset", "build and transform labeled window datasets");
  ds->require_subcommand(1);
  auto* dsb = ds->add_subcommand("build", "generate a labeled base from the neuron model");
  cs_base_config build_cfg;
  cs_base_config_init(&build_cfg);
  hr_flags dsb_hr;
  dsb_hr.add(dsb, false);
  fe_flags dsb_fe;
  dsb_fe.add(dsb);
  std::string dsb_out;
  dsb->add_option("--r-min", build_cfg.r_min, "r grid start");
  dsb->add_option("--r-max", build_cfg.r_max, "r grid end");
  dsb->add_option("--n-r", build_cfg.n_r, "r grid size")->check(CLI::PositiveNumber);
  dsb->add_option("--intervals", build_cfg.intervals_per_r, "long series length per r");
  dsb->add_option("--nl", build_cfg.nl, "window length")->check(CLI::PositiveNumber);
  dsb->add_option("--shift", build_cfg.shift, "window shift")->check(CLI::PositiveNumber);
  dsb->add_option("--count", build_cfg.windows_per_r, "windows per r")
      ->check(CLI::PositiveNumber);
  dsb->add_option("--out", dsb_out, "dataset CSV path")->required();

  auto* dsm = ds->add_subcommand("merge", "concatenate two datasets");
  std::string dsm_a, dsm_b, dsm_out;
  dsm->add_option("--a", dsm_a, "first dataset")->required();
  dsm->add_option("--b", dsm_b, "second dataset")->required();
  dsm->add_option("--out", dsm_out, "output CSV")->required();

  auto* dsn = ds->add_subcommand("normalize", "subtract a mean from all elements");
  std::string dsn_in, dsn_mean = "auto", dsn_out;
  dsn->add_option("--in", dsn_in, "input dataset")->required();
  dsn->add_option("--mean", dsn_mean, "auto or a value");
  dsn->add_option("--out", dsn_out, "output CSV")->required();

  auto* dse = ds->add_subcommand("experimental", "label windows of recorded spike periods");
  std::vector<std::string> dse_periods, dse_waveforms;
  size_t dse_nl = 50, dse_local = 2;
  double dse_cutoff = 0.0, dse_height = 0.2;
  fe_flags dse_fe;
  dse_fe.add(dse);
  std::string dse_out;
  dse->add_option("--periods", dse_periods, "period CSV source, <file>=<tag>");
  dse->add_option("--waveform", dse_waveforms, "waveform CSV source, <file>=<tag>");
  dse->add_option("--nl", dse_nl, "window length")->check(CLI::PositiveNumber);
  dse->add_option("--cutoff", dse_cutoff, "low-pass cutoff in Hz (0 = off)");
  dse->add_option("--height", dse_height, "peak height fraction of range");
  dse->add_option("--local-points", dse_local, "neighbors per side for peaks");
  dse->add_option("--out", dse_out, "dataset CSV path")->required();

  // entropy
  auto* ent = app.add_subcommand("entropy", "fuzzy entropy of one CSV column");
  std::string ent_in, ent_col = "interval";
  fe_flags ent_fe;
  ent_fe.add(ent);
  ent->add_option("--in", ent_in, "input CSV")->required();
  ent->add_option("--column", ent_col, "column name or index");

  // train
  auto* trn = app.add_subcommand("train", "train the entropy-approximating perceptron");
  std::string trn_data, trn_out;
  size_t trn_nh = 50;
  train_flags trn_tf;
  trn->add_option("--data", trn_data, "dataset CSV")->required();
  trn->add_option("--nh", trn_nh, "hidden width")->check(CLI::PositiveNumber);
  trn_tf.add(trn);
  trn->add_option("--out", trn_out, "model file path")->required();

  // cv
  auto* cv = app.add_subcommand("cv", "k-fold cross-validation");
  std::string cv_data, cv_out, cv_preds, cv_trace;
  size_t cv_k = 10, cv_nh = 50, cv_avg = 20;
  train_flags cv_tf;
  cv->add_option("--data", cv_data, "dataset CSV")->required();
  cv->add_option("--k", cv_k, "fold count")->check(CLI::Range(size_t{2}, size_t{1000000}));
  cv->add_option("--nh", cv_nh, "hidden width")->check(CLI::PositiveNumber);
  cv_tf.add(cv);
  cv->add_option("--out", cv_out, "metrics report CSV")->required();
  cv->add_option("--predictions", cv_preds, "held-out predictions CSV");
  cv->add_option("--trace", cv_trace, "index,sfu,spe,spe_avgN CSV");
  cv->add_option("--avg", cv_avg, "trailing average span for the trace");

  // cross
  auto* crs = app.add_subcommand("cross", "train on one dataset, test on another");
  std::string crs_train, crs_test, crs_out;
  size_t crs_nh = 50;
  train_flags crs_tf;
  crs->add_option("--train-data", crs_train, "training dataset CSV")->required();
  crs->add_option("--test-data", crs_test, "test dataset CSV")->required();
  crs->add_option("--nh", crs_nh, "hidden width")->check(CLI::PositiveNumber);
  crs_tf.add(crs);
  crs->add_option("--out", crs_out, "metrics CSV")->required();

  // characterize
  auto* chr = app.add_subcommand("characterize", "sensor figures of merit over the regime lists");
  std::string chr_pred = "sfu", chr_model, chr_chaotic, chr_regular, chr_out;
  double chr_norm_mean = 0.0;
  size_t chr_nl = 50, chr_shift = 4, chr_count = 100, chr_intervals = 500, chr_avg = 1;
  hr_flags chr_hr;
  chr_hr.add(chr, false);
  fe_flags chr_fe;
  chr_fe.add(chr);
  chr->add_option("--predictor", chr_pred, "sfu (direct entropy) or spe (model)")
      ->check(CLI::IsMember({"sfu", "spe"}));
  chr->add_option("--model", chr_model, "model file for spe");
  chr->add_option("--normalize-mean", chr_norm_mean, "mean subtracted before model forward");
  chr->add_option("--nl", chr_nl, "window length")->check(CLI::PositiveNumber);
  chr->add_option("--shift", chr_shift, "window shift")->check(CLI::PositiveNumber);
  chr->add_option("--count", chr_count, "windows per r")->check(CLI::PositiveNumber);
  chr->add_option("--intervals", chr_intervals, "long series length per r");
  chr->add_option("--avg", chr_avg, "trailing average span (1 = off)");
  chr->add_option("--chaotic-r", chr_chaotic, "comma-separated chaotic r list");
  chr->add_option("--regular-r", chr_regular, "comma-separated regular r list");
  chr->add_option("--out", chr_out, "characteristics CSV")->required();

  // lengthstudy
  auto* len = app.add_subcommand("lengthstudy", "characteristics vs window length");
  std::string len_nls = "10,20,30,40,50,60,70,80,90,100";
  std::string len_chaotic, len_regular, len_out;
  size_t len_shift = 4, len_count = 100, len_intervals = 500;
  hr_flags len_hr;
  len_hr.add(len, false);
  fe_flags len_fe;
  len_fe.add(len);
  len->add_option("--nl-list", len_nls, "comma-separated window lengths");
  len->add_option("--shift", len_shift, "window shift");
  len->add_option("--count", len_count, "windows per r");
  len->add_option("--intervals", len_intervals, "long series length per r");
  len->add_option("--chaotic-r", len_chaotic, "comma-separated chaotic r list");
  len->add_option("--regular-r", len_regular, "comma-separated regular r list");
  len->add_option("--out", len_out, "study CSV")->required();

  // peaks
  auto* pk = app.add_subcommand("peaks", "extract spike times from a waveform CSV");
  std::string pk_in, pk_out;
  double pk_cutoff = 0.0, pk_height = 0.2;
  size_t pk_local = 2;
  bool pk_intervals = false;
  pk->add_option("--in", pk_in, "waveform CSV (t,v)")->required();
  pk->add_option("--cutoff", pk_cutoff, "low-pass cutoff in Hz (0 = off)");
  pk->add_option("--height", pk_height, "peak height fraction of range");
  pk->add_option("--local-points", pk_local, "neighbors per side");
  pk->add_flag("--intervals", pk_intervals, "emit periods instead of times");
  pk->add_option("--out", pk_out, "output CSV")->required();

  // predict
  auto* prd = app.add_subcommand("predict", "run a saved model over window rows");
  std::string prd_model, prd_in, prd_out;
  double prd_norm = 0.0;
  prd->add_option("--model", prd_model, "model file")->required();
  prd->add_option("--in", prd_in, "dataset CSV or bare window rows")->required();
  prd->add_option("--normalize-mean", prd_norm, "mean subtracted from each window");
  prd->add_option("--out", prd_out, "predictions CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (sim->parsed()) return cmd_simulate(sim_hr, sim_n, sim_out, sim_traj);
  if (bif->parsed()) {
    return cmd_bifurcate(bif_hr, bif_rmin, bif_rmax, bif_nr, bif_per, bif_out);
  }
  if (ds->parsed()) {
    if (dsb->parsed()) {
      dsb_fe.resolve();
      build_cfg.hr = dsb_hr.p;
      build_cfg.i_ex = dsb_hr.p.i_ex;
      build_cfg.fe = dsb_fe.p;
      return cmd_dataset_build(build_cfg, dsb_out);
    }
    if (dsm->parsed()) return cmd_dataset_merge(dsm_a, dsm_b, dsm_out);
    if (dsn->parsed()) return cmd_dataset_normalize(dsn_in, dsn_mean, dsn_out);
    if (dse->parsed()) {
      return cmd_dataset_experimental(dse_periods, dse_waveforms, dse_nl, dse_fe, dse_cutoff,
                                      dse_height, dse_local, dse_out);
    }
  }
  if (ent->parsed()) return cmd_entropy(ent_in, ent_col, ent_fe);
  if (trn->parsed()) return cmd_train(trn_data, trn_nh, trn_tf, trn_out);
  if (cv->parsed()) {
    return cmd_cv(cv_data, cv_k, cv_nh, cv_tf, cv_out, cv_preds, cv_trace, cv_avg);
  }
  if (crs->parsed()) return cmd_cross(crs_train, crs_test, crs_nh, crs_tf, crs_out);
  if (chr->parsed()) {
    return cmd_characterize(chr_pred, chr_model, chr_norm_mean, chr_fe, chr_hr, chr_nl, chr_shift,
                            chr_count, chr_intervals, chr_avg, chr_chaotic, chr_regular, chr_out);
  }
  if (len->parsed()) {
    return cmd_lengthstudy(len_nls, len_fe, len_hr, len_shift, len_count, len_intervals,
                           len_chaotic, len_regular, len_out);
  }
  if (pk->parsed()) return cmd_peaks(pk_in, pk_cutoff, pk_height, pk_local, pk_intervals, pk_out);
  if (prd->parsed()) return cmd_predict(prd_model, prd_in, prd_norm, prd_out);
  return usage_fail("no command given");
}
