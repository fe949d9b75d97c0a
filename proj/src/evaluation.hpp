#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "dataset.hpp"
#include "mlp.hpp"

namespace chaos {

double r2_score(std::span<const double> targets, std::span<const double> predictions);
double rmse(std::span<const double> targets, std::span<const double> predictions);
// Mean absolute percentage error; rejects targets below 1e-9 in magnitude.
double mape_percent(std::span<const double> targets, std::span<const double> predictions);

struct fold_metrics {
  double r2 = 0.0;
  double rmse = 0.0;
  double mape_percent = 0.0;
};

struct metrics_report {
  std::vector<fold_metrics> per_fold;
  fold_metrics aggregate;  // mean of each metric over folds
};

struct cv_result {
  metrics_report report;
  std::vector<double> predictions;    // out-of-fold, in dataset order
  std::vector<std::size_t> fold_of;   // test fold of each sample
};

// Seeded shuffle, then contiguous blocks; every sample is held out exactly
// once. Fold trainings run in parallel with seeds derived from (seed, fold).
cv_result kfold_cv(const labeled_dataset& ds, std::size_t k, std::size_t nh,
                   const train_config& cfg);

struct cross_result {
  fold_metrics metrics;
  std::vector<double> predictions;  // over test_ds, in order
};

// Single training on train_ds, evaluation on test_ds.
cross_result cross_base(const labeled_dataset& train_ds, const labeled_dataset& test_ds,
                        std::size_t nh, const train_config& cfg);

struct sensor_characteristics {
  double en_av_order = 0.0;
  double en_av_chaos = 0.0;
  double en_r = 0.0;          // en_av_chaos - en_av_order
  double std_en_order = 0.0;  // mean over the regime's series of each series' std
  double std_en_chaos = 0.0;
  double en_sens = 0.0;       // en_r / std_en_chaos
  double en_err_percent = 0.0;
  bool degenerate = false;    // en_r == 0: en_sens/en_err undefined (NaN)
};

using predictor = std::function<double(std::span<const double>)>;

struct regime_config {
  double i_ex = 3.25;
  std::vector<double> chaotic_r{0.0056, 0.0076, 0.0082, 0.0119, 0.0141};
  std::vector<double> regular_r{0.0068, 0.0070, 0.0099, 0.0105, 0.0108};
  windowing_config windowing{};     // nl=50, shift=4, 100 windows per r
  std::size_t intervals_per_r = 500;
  std::size_t avg_n = 1;            // trailing average per r block before stats
  hr_params hr{};
};

// Generates windows_per_r windows for each regime r, applies the predictor,
// and pools the per-regime values into the figures of merit.
sensor_characteristics characterize(const predictor& predict, const regime_config& cfg);

// Trailing moving average of span n that never crosses a block boundary; the
// first n-1 outputs of a block average the available prefix. Empty
// block_lens means one block.
std::vector<double> averaging_over_n(std::span<const double> values, std::size_t n,
                                     std::span<const std::size_t> block_lens = {});

struct length_row {
  std::size_t nl = 0;
  sensor_characteristics chars;
};

// Characteristics of the direct-entropy predictor across window lengths; the
// per-r interval series are generated once and re-windowed per nl.
std::vector<length_row> length_study(std::span<const std::size_t> nl_values,
                                     const regime_config& cfg, const fuzzyen_params& fe);

std::string metrics_report_csv(const metrics_report& report);
std::string characteristics_csv(std::span<const sensor_characteristics> rows,
                                std::span<const std::size_t> nls = {});
std::string trace_csv(std::span<const double> targets, std::span<const double> predictions,
                      std::span<const double> averaged);

}  // namespace chaos
