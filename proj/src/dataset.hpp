#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fuzzy_entropy.hpp"
#include "hr.hpp"

namespace chaos {

// One fixed-length slice of a long interval series, with its provenance.
struct window {
  std::vector<double> values;
  std::optional<double> source_r;     // absent for experimental data
  std::optional<double> source_i_ex;  // absent for experimental data
  std::string source_tag;             // recording id, rest/stimulation, ...
  std::size_t start_index = 0;        // offset in the parent long series
};

struct dataset_stats {
  double mean = 0.0;             // over every element of every window
  double window_mean_min = 0.0;  // min over windows of the window's own mean
  double window_mean_max = 0.0;
  double min_value = 0.0;
  double max_value = 0.0;
};

struct labeled_dataset {
  std::vector<window> windows;
  std::vector<double> targets;  // fuzzy entropy per window
  dataset_stats stats;

  std::size_t size() const { return windows.size(); }
  std::size_t window_len() const { return windows.empty() ? 0 : windows.front().values.size(); }
};

struct windowing_config {
  std::size_t nl = 50;                        // window length
  std::size_t shift = 4;                      // step between window starts
  std::optional<std::size_t> count = 100;     // windows per long series; nullopt = as many as fit
};

// Slices `series` into windows starting at offsets 0, shift, 2*shift, ...
// Throws errc::too_short when the requested count does not fit.
std::vector<window> window_series(std::span<const double> series, const windowing_config& cfg);

dataset_stats compute_stats(const labeled_dataset& ds);

struct base_config {
  double i_ex = 3.25;
  double r_min = 5e-3;
  double r_max = 1.5e-2;
  std::size_t n_r = 100;            // evenly spaced, both endpoints included
  std::size_t intervals_per_r = 500;
  windowing_config windowing{};
  hr_params hr{};                   // template; r, i_ex, target_intervals overridden
  fuzzyen_params fe{};
};

// One long interval series per r, windowed and labeled with the fuzzy
// entropy of each raw window; windows ordered by r then by start offset.
labeled_dataset build_base(const base_config& cfg);

// Subtracts `mean` from every element; targets unchanged, stats recomputed.
labeled_dataset normalize(const labeled_dataset& ds, double mean);

// a's windows then b's; window lengths must match.
labeled_dataset merge(const labeled_dataset& a, const labeled_dataset& b);

// CSV persistence: header `tag,r,i_ex,start,target,v1..vNL`, 15 significant
// digits. Empty r/i_ex fields mark experimental windows.
std::string dataset_csv(const labeled_dataset& ds);
void save_dataset(const labeled_dataset& ds, const std::string& path);
labeled_dataset load_dataset(const std::string& path);

struct period_source {
  std::string tag;
  std::vector<double> values;  // inter-spike periods, seconds
};

struct experimental_build_result {
  labeled_dataset ds;
  std::vector<std::string> skipped;  // tags of sources shorter than one window
};

experimental_build_result build_experimental(std::span<const period_source> sources,
                                             const windowing_config& cfg,
                                             const fuzzyen_params& fe);

// Lengths of runs of windows sharing (tag, r): the per-source blocks that
// trailing averages must not cross.
std::vector<std::size_t> block_lengths(const labeled_dataset& ds);

}  // namespace chaos
