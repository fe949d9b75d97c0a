#include "dataset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "csv.hpp"
#include "errors.hpp"
#include "parallel.hpp"

namespace chaos {

std::vector<window> window_series(std::span<const double> series, const windowing_config& cfg) {
  if (cfg.nl < 2) throw error(errc::invalid_argument, "window length must be >= 2");
  if (cfg.shift < 1) throw error(errc::invalid_argument, "shift must be >= 1");

  std::size_t n_windows;
  if (cfg.count) {
    std::size_t needed = cfg.nl + (*cfg.count - 1) * cfg.shift;
    if (*cfg.count < 1) throw error(errc::invalid_argument, "count must be >= 1");
    if (series.size() < needed) {
      throw error(errc::too_short, "series of " + std::to_string(series.size()) +
                                       " cannot yield " + std::to_string(*cfg.count) +
                                       " windows (needs " + std::to_string(needed) + ")");
    }
    n_windows = *cfg.count;
  } else {
    if (series.size() < cfg.nl) {
      throw error(errc::too_short, "series of " + std::to_string(series.size()) +
                                       " shorter than window length " + std::to_string(cfg.nl));
    }
    n_windows = (series.size() - cfg.nl) / cfg.shift + 1;
  }

  std::vector<window> out;
  out.reserve(n_windows);
  for (std::size_t w = 0; w < n_windows; ++w) {
    std::size_t start = w * cfg.shift;
    window win;
    win.values.assign(series.begin() + start, series.begin() + start + cfg.nl);
    win.start_index = start;
    out.push_back(std::move(win));
  }
  return out;
}

dataset_stats compute_stats(const labeled_dataset& ds) {
  if (ds.windows.empty()) throw error(errc::invalid_argument, "empty dataset");
  dataset_stats st;
  double sum = 0.0;
  std::size_t n = 0;
  st.min_value = std::numeric_limits<double>::infinity();
  st.max_value = -std::numeric_limits<double>::infinity();
  st.window_mean_min = std::numeric_limits<double>::infinity();
  st.window_mean_max = -std::numeric_limits<double>::infinity();
  for (const auto& w : ds.windows) {
    double wsum = 0.0;
    for (double v : w.values) {
      wsum += v;
      st.min_value = std::min(st.min_value, v);
      st.max_value = std::max(st.max_value, v);
    }
    double wmean = wsum / static_cast<double>(w.values.size());
    st.window_mean_min = std::min(st.window_mean_min, wmean);
    st.window_mean_max = std::max(st.window_mean_max, wmean);
    sum += wsum;
    n += w.values.size();
  }
  st.mean = sum / static_cast<double>(n);
  return st;
}

labeled_dataset build_base(const base_config& cfg) {
  if (!(cfg.r_min < cfg.r_max) && cfg.n_r > 1) {
    throw error(errc::invalid_argument, "r_min must be below r_max");
  }
  if (cfg.n_r < 1) throw error(errc::invalid_argument, "n_r must be >= 1");

  std::vector<double> r_grid(cfg.n_r);
  for (std::size_t i = 0; i < cfg.n_r; ++i) {
    r_grid[i] = cfg.n_r == 1 ? cfg.r_min
                             : cfg.r_min + (cfg.r_max - cfg.r_min) * static_cast<double>(i) /
                                               static_cast<double>(cfg.n_r - 1);
  }

  struct slot {
    std::vector<window> windows;
    std::vector<double> targets;
    std::optional<error> err;
  };
  std::vector<slot> slots(cfg.n_r);
  parallel_for(cfg.n_r, [&](std::size_t i) {
    try {
      hr_params p = cfg.hr;
      p.r = r_grid[i];
      p.i_ex = cfg.i_ex;
      p.target_intervals = cfg.intervals_per_r;
      interval_series series = run_intervals(p);
      auto wins = window_series(series, cfg.windowing);
      slot& s = slots[i];
      s.targets.reserve(wins.size());
      for (auto& w : wins) {
        w.source_r = r_grid[i];
        w.source_i_ex = cfg.i_ex;
        s.targets.push_back(fuzzy_en(w.values, cfg.fe).value);
      }
      s.windows = std::move(wins);
    } catch (const error& e) {
      slots[i].err = error(e.code(), std::string(e.what()) +
                                         " (r=" + csv::format_double(r_grid[i], 12) + ")");
    }
  });

  labeled_dataset ds;
  for (auto& s : slots) {
    if (s.err) throw *s.err;
    std::move(s.windows.begin(), s.windows.end(), std::back_inserter(ds.windows));
    ds.targets.insert(ds.targets.end(), s.targets.begin(), s.targets.end());
  }
  ds.stats = compute_stats(ds);
  return ds;
}

labeled_dataset normalize(const labeled_dataset& ds, double mean) {
  labeled_dataset out = ds;
  for (auto& w : out.windows) {
    for (double& v : w.values) v -= mean;
  }
  if (!out.windows.empty()) out.stats = compute_stats(out);
  return out;
}

labeled_dataset merge(const labeled_dataset& a, const labeled_dataset& b) {
  if (!a.windows.empty() && !b.windows.empty() && a.window_len() != b.window_len()) {
    throw error(errc::invalid_argument, "window length mismatch: " +
                                            std::to_string(a.window_len()) + " vs " +
                                            std::to_string(b.window_len()));
  }
  labeled_dataset out = a;
  out.windows.insert(out.windows.end(), b.windows.begin(), b.windows.end());
  out.targets.insert(out.targets.end(), b.targets.begin(), b.targets.end());
  if (!out.windows.empty()) out.stats = compute_stats(out);
  return out;
}

std::string dataset_csv(const labeled_dataset& ds) {
  std::size_t nl = ds.window_len();
  std::ostringstream ss;
  ss << "tag,r,i_ex,start,target";
  for (std::size_t k = 1; k <= nl; ++k) ss << ",v" << k;
  ss << '\n';
  for (std::size_t i = 0; i < ds.windows.size(); ++i) {
    const window& w = ds.windows[i];
    if (w.source_tag.find(',') != std::string::npos ||
        w.source_tag.find('\n') != std::string::npos) {
      throw error(errc::invalid_argument, "tag must not contain ',' or newline");
    }
    ss << w.source_tag << ',';
    if (w.source_r) ss << csv::format_double(*w.source_r, 15);
    ss << ',';
    if (w.source_i_ex) ss << csv::format_double(*w.source_i_ex, 15);
    ss << ',' << w.start_index << ',' << csv::format_double(ds.targets[i], 15);
    for (double v : w.values) ss << ',' << csv::format_double(v, 15);
    ss << '\n';
  }
  return ss.str();
}

void save_dataset(const labeled_dataset& ds, const std::string& path) {
  csv::atomic_write_text(path, dataset_csv(ds));
}

labeled_dataset load_dataset(const std::string& path) {
  auto rows = csv::read_rows(path);
  if (rows.empty()) throw error(errc::format, "empty dataset file: " + path);
  const auto& header = rows[0];
  if (header.size() < 6 || header[0] != "tag" || header[1] != "r" || header[2] != "i_ex" ||
      header[3] != "start" || header[4] != "target") {
    throw error(errc::format, "unexpected dataset header in " + path);
  }
  std::size_t nl = header.size() - 5;

  labeled_dataset ds;
  ds.windows.reserve(rows.size() - 1);
  ds.targets.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size()) {
      throw error(errc::format,
                  "row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                      " fields, expected " + std::to_string(header.size()));
    }
    window w;
    w.source_tag = row[0];
    if (!row[1].empty()) w.source_r = csv::parse_double(row[1]);
    if (!row[2].empty()) w.source_i_ex = csv::parse_double(row[2]);
    w.start_index = static_cast<std::size_t>(csv::parse_double(row[3]));
    ds.targets.push_back(csv::parse_double(row[4]));
    w.values.reserve(nl);
    for (std::size_t k = 5; k < row.size(); ++k) w.values.push_back(csv::parse_double(row[k]));
    ds.windows.push_back(std::move(w));
  }
  if (!ds.windows.empty()) ds.stats = compute_stats(ds);
  return ds;
}

experimental_build_result build_experimental(std::span<const period_source> sources,
                                             const windowing_config& cfg,
                                             const fuzzyen_params& fe) {
  experimental_build_result res;
  windowing_config wc = cfg;
  wc.count.reset();  // take every window that fits
  for (const auto& src : sources) {
    if (src.values.size() < wc.nl) {
      res.skipped.push_back(src.tag);
      continue;
    }
    auto wins = window_series(src.values, wc);
    for (auto& w : wins) {
      w.source_tag = src.tag;
      res.ds.targets.push_back(fuzzy_en(w.values, fe).value);
      res.ds.windows.push_back(std::move(w));
    }
  }
  if (!res.ds.windows.empty()) res.ds.stats = compute_stats(res.ds);
  return res;
}

std::vector<std::size_t> block_lengths(const labeled_dataset& ds) {
  std::vector<std::size_t> lens;
  std::size_t run = 0;
  for (std::size_t i = 0; i < ds.windows.size(); ++i) {
    if (i > 0) {
      const window& a = ds.windows[i - 1];
      const window& b = ds.windows[i];
      bool same = a.source_tag == b.source_tag && a.source_r == b.source_r;
      if (!same) {
        lens.push_back(run);
        run = 0;
      }
    }
    ++run;
  }
  if (run > 0) lens.push_back(run);
  return lens;
}

}  // namespace chaos
