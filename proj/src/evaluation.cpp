#include "evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "csv.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace chaos {

namespace {

void check_pair(std::span<const double> t, std::span<const double> p) {
  if (t.empty() || t.size() != p.size()) {
    throw error(errc::invalid_argument, "targets and predictions must be nonempty, equal length");
  }
}

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double pop_std_of(std::span<const double> v) {
  double m = mean_of(v);
  double sq = 0.0;
  for (double x : v) sq += (x - m) * (x - m);
  return std::sqrt(sq / static_cast<double>(v.size()));
}

fold_metrics metrics_of(std::span<const double> t, std::span<const double> p) {
  return {r2_score(t, p), rmse(t, p), mape_percent(t, p)};
}

// En_av: mean over every value of the regime; Std_En: mean over the regime's
// series of the per-series standard deviation (the deviation is a per-series
// figure, so block structure stays out of it).
double regime_mean(const std::vector<std::vector<double>>& series_vals) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& s : series_vals) {
    for (double v : s) sum += v;
    n += s.size();
  }
  return sum / static_cast<double>(n);
}

double regime_std(const std::vector<std::vector<double>>& series_vals) {
  double sum = 0.0;
  for (const auto& s : series_vals) sum += pop_std_of(s);
  return sum / static_cast<double>(series_vals.size());
}

sensor_characteristics chars_from_regimes(const std::vector<std::vector<double>>& chaos_vals,
                                          const std::vector<std::vector<double>>& order_vals) {
  sensor_characteristics sc;
  sc.en_av_chaos = regime_mean(chaos_vals);
  sc.en_av_order = regime_mean(order_vals);
  sc.std_en_chaos = regime_std(chaos_vals);
  sc.std_en_order = regime_std(order_vals);
  sc.en_r = sc.en_av_chaos - sc.en_av_order;
  if (sc.en_r == 0.0 || !std::isfinite(sc.en_r)) {
    sc.degenerate = true;
    sc.en_sens = std::numeric_limits<double>::quiet_NaN();
    sc.en_err_percent = std::numeric_limits<double>::quiet_NaN();
  } else {
    sc.en_sens = sc.en_r / sc.std_en_chaos;
    sc.en_err_percent = 100.0 * sc.std_en_chaos / sc.en_r;
  }
  return sc;
}

// Per-r window predictions for one regime list, optionally averaged within
// each r block, in list order.
std::vector<std::vector<double>> regime_values(const predictor& predict,
                                               std::span<const double> r_values,
                                               const regime_config& cfg,
                                               const std::vector<interval_series>* cached) {
  std::vector<std::vector<double>> slots(r_values.size());
  parallel_for(r_values.size(), [&](std::size_t i) {
    interval_series series;
    if (cached) {
      series = (*cached)[i];
    } else {
      hr_params p = cfg.hr;
      p.r = r_values[i];
      p.i_ex = cfg.i_ex;
      p.target_intervals = cfg.intervals_per_r;
      series = run_intervals(p);
    }
    auto wins = window_series(series, cfg.windowing);
    std::vector<double> vals;
    vals.reserve(wins.size());
    for (const auto& w : wins) vals.push_back(predict(w.values));
    if (cfg.avg_n > 1) vals = averaging_over_n(vals, cfg.avg_n);
    slots[i] = std::move(vals);
  });
  return slots;
}

}  // namespace

double r2_score(std::span<const double> targets, std::span<const double> predictions) {
  check_pair(targets, predictions);
  double mean = mean_of(targets);
  double ss_tot = 0.0, ss_res = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    ss_tot += (targets[i] - mean) * (targets[i] - mean);
    ss_res += (targets[i] - predictions[i]) * (targets[i] - predictions[i]);
  }
  if (ss_tot == 0.0) throw error(errc::invalid_argument, "zero target variance");
  return 1.0 - ss_res / ss_tot;
}

double rmse(std::span<const double> targets, std::span<const double> predictions) {
  check_pair(targets, predictions);
  double sq = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    double e = targets[i] - predictions[i];
    sq += e * e;
  }
  return std::sqrt(sq / static_cast<double>(targets.size()));
}

double mape_percent(std::span<const double> targets, std::span<const double> predictions) {
  check_pair(targets, predictions);
  double sum = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (std::fabs(targets[i]) < 1e-9) {
      throw error(errc::invalid_argument, "target too close to zero for MAPE");
    }
    sum += std::fabs((targets[i] - predictions[i]) / targets[i]);
  }
  return 100.0 * sum / static_cast<double>(targets.size());
}

cv_result kfold_cv(const labeled_dataset& ds, std::size_t k, std::size_t nh,
                   const train_config& cfg) {
  std::size_t n = ds.size();
  if (k < 2) throw error(errc::invalid_argument, "k must be >= 2");
  if (n < k) throw error(errc::invalid_argument, "dataset smaller than k");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng shuffle_rng(derive_seed(cfg.seed, 0xf01d));
  shuffle_rng.shuffle(std::span<std::size_t>(order));

  std::vector<std::size_t> bounds(k + 1);
  for (std::size_t f = 0; f <= k; ++f) bounds[f] = f * n / k;

  cv_result res;
  res.report.per_fold.resize(k);
  res.predictions.assign(n, 0.0);
  res.fold_of.assign(n, 0);

  parallel_for(k, [&](std::size_t f) {
    labeled_dataset train_ds;
    std::vector<std::size_t> test_idx;
    for (std::size_t pos = 0; pos < n; ++pos) {
      std::size_t idx = order[pos];
      if (pos >= bounds[f] && pos < bounds[f + 1]) {
        test_idx.push_back(idx);
      } else {
        train_ds.windows.push_back(ds.windows[idx]);
        train_ds.targets.push_back(ds.targets[idx]);
      }
    }
    train_config fold_cfg = cfg;
    fold_cfg.seed = derive_seed(cfg.seed, f + 1);
    mlp_model model = train(train_ds, nh, fold_cfg);

    std::vector<double> t, p;
    t.reserve(test_idx.size());
    p.reserve(test_idx.size());
    for (std::size_t idx : test_idx) {
      double pred = forward(model, ds.windows[idx].values);
      res.predictions[idx] = pred;
      res.fold_of[idx] = f;
      t.push_back(ds.targets[idx]);
      p.push_back(pred);
    }
    res.report.per_fold[f] = metrics_of(t, p);
  });

  fold_metrics agg;
  for (const auto& fm : res.report.per_fold) {
    agg.r2 += fm.r2;
    agg.rmse += fm.rmse;
    agg.mape_percent += fm.mape_percent;
  }
  double inv_k = 1.0 / static_cast<double>(k);
  res.report.aggregate = {agg.r2 * inv_k, agg.rmse * inv_k, agg.mape_percent * inv_k};
  return res;
}

cross_result cross_base(const labeled_dataset& train_ds, const labeled_dataset& test_ds,
                        std::size_t nh, const train_config& cfg) {
  if (train_ds.window_len() != test_ds.window_len()) {
    throw error(errc::invalid_argument, "window length mismatch between datasets");
  }
  mlp_model model = train(train_ds, nh, cfg);
  cross_result res;
  res.predictions.reserve(test_ds.size());
  for (const auto& w : test_ds.windows) res.predictions.push_back(forward(model, w.values));
  res.metrics = metrics_of(test_ds.targets, res.predictions);
  return res;
}

sensor_characteristics characterize(const predictor& predict, const regime_config& cfg) {
  if (cfg.chaotic_r.empty() || cfg.regular_r.empty()) {
    throw error(errc::invalid_argument, "regime lists must be nonempty");
  }
  auto chaos_vals = regime_values(predict, cfg.chaotic_r, cfg, nullptr);
  auto order_vals = regime_values(predict, cfg.regular_r, cfg, nullptr);
  return chars_from_regimes(chaos_vals, order_vals);
}

std::vector<double> averaging_over_n(std::span<const double> values, std::size_t n,
                                     std::span<const std::size_t> block_lens) {
  if (n < 1) throw error(errc::invalid_argument, "n must be >= 1");
  std::vector<std::size_t> blocks(block_lens.begin(), block_lens.end());
  if (blocks.empty()) blocks.push_back(values.size());
  std::size_t total = std::accumulate(blocks.begin(), blocks.end(), std::size_t{0});
  if (total != values.size()) {
    throw error(errc::invalid_argument, "block lengths do not sum to the series length");
  }

  std::vector<double> out;
  out.reserve(values.size());
  std::size_t offset = 0;
  for (std::size_t len : blocks) {
    double running = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      running += values[offset + i];
      if (i >= n) running -= values[offset + i - n];
      std::size_t span = std::min(i + 1, n);
      out.push_back(running / static_cast<double>(span));
    }
    offset += len;
  }
  return out;
}

std::vector<length_row> length_study(std::span<const std::size_t> nl_values,
                                     const regime_config& cfg, const fuzzyen_params& fe) {
  for (std::size_t nl : nl_values) {
    if (nl < 4) throw error(errc::invalid_argument, "nl must be >= 4");
  }
  std::size_t count = cfg.windowing.count.value_or(100);
  std::size_t max_nl = *std::max_element(nl_values.begin(), nl_values.end());
  std::size_t needed = max_nl + (count - 1) * cfg.windowing.shift;
  std::size_t per_r = std::max(cfg.intervals_per_r, needed);

  // One long series per regime r, re-windowed for every nl.
  auto generate = [&](std::span<const double> rs) {
    std::vector<interval_series> out(rs.size());
    parallel_for(rs.size(), [&](std::size_t i) {
      hr_params p = cfg.hr;
      p.r = rs[i];
      p.i_ex = cfg.i_ex;
      p.target_intervals = per_r;
      out[i] = run_intervals(p);
    });
    return out;
  };
  auto chaos_series = generate(cfg.chaotic_r);
  auto order_series = generate(cfg.regular_r);

  predictor sfu = [&fe](std::span<const double> w) { return fuzzy_en(w, fe).value; };

  std::vector<length_row> rows;
  rows.reserve(nl_values.size());
  for (std::size_t nl : nl_values) {
    regime_config rc = cfg;
    rc.windowing.nl = nl;
    rc.windowing.count = count;
    auto chaos_vals = regime_values(sfu, rc.chaotic_r, rc, &chaos_series);
    auto order_vals = regime_values(sfu, rc.regular_r, rc, &order_series);
    rows.push_back({nl, chars_from_regimes(chaos_vals, order_vals)});
  }
  return rows;
}

std::string metrics_report_csv(const metrics_report& report) {
  std::ostringstream ss;
  ss << "fold,r2,rmse,mape_percent\n";
  for (std::size_t f = 0; f < report.per_fold.size(); ++f) {
    const auto& m = report.per_fold[f];
    ss << f << ',' << csv::format_double(m.r2, 15) << ',' << csv::format_double(m.rmse, 15) << ','
       << csv::format_double(m.mape_percent, 15) << '\n';
  }
  const auto& a = report.aggregate;
  ss << "aggregate," << csv::format_double(a.r2, 15) << ',' << csv::format_double(a.rmse, 15)
     << ',' << csv::format_double(a.mape_percent, 15) << '\n';
  return ss.str();
}

std::string characteristics_csv(std::span<const sensor_characteristics> rows,
                                std::span<const std::size_t> nls) {
  std::ostringstream ss;
  bool with_nl = !nls.empty();
  if (with_nl && nls.size() != rows.size()) {
    throw error(errc::invalid_argument, "nl column does not match row count");
  }
  if (with_nl) ss << "nl,";
  ss << "en_av_order,en_av_chaos,en_r,std_en_order,std_en_chaos,en_sens,en_err_percent\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& c = rows[i];
    if (with_nl) ss << nls[i] << ',';
    ss << csv::format_double(c.en_av_order, 15) << ',' << csv::format_double(c.en_av_chaos, 15)
       << ',' << csv::format_double(c.en_r, 15) << ',' << csv::format_double(c.std_en_order, 15)
       << ',' << csv::format_double(c.std_en_chaos, 15) << ',' << csv::format_double(c.en_sens, 15)
       << ',' << csv::format_double(c.en_err_percent, 15) << '\n';
  }
  return ss.str();
}

std::string trace_csv(std::span<const double> targets, std::span<const double> predictions,
                      std::span<const double> averaged) {
  if (targets.size() != predictions.size() || targets.size() != averaged.size()) {
    throw error(errc::invalid_argument, "trace columns must have equal length");
  }
  std::ostringstream ss;
  ss << "index,sfu,spe,spe_avg20\n";
  for (std::size_t i = 0; i < targets.size(); ++i) {
    ss << i << ',' << csv::format_double(targets[i], 15) << ','
       << csv::format_double(predictions[i], 15) << ',' << csv::format_double(averaged[i], 15)
       << '\n';
  }
  return ss.str();
}

}  // namespace chaos
