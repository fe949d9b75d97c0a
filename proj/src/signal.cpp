#include "signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "errors.hpp"

namespace chaos {

waveform lowpass(const waveform& w, double cutoff_hz) {
  if (w.samples.empty()) throw error(errc::invalid_argument, "empty waveform");
  if (!(w.sample_rate > 0.0)) throw error(errc::invalid_argument, "sample_rate must be > 0");
  if (!(cutoff_hz > 0.0) || !(cutoff_hz < w.sample_rate / 2.0)) {
    throw error(errc::invalid_argument, "cutoff must lie in (0, sample_rate/2)");
  }

  double alpha = 1.0 - std::exp(-2.0 * std::numbers::pi * cutoff_hz / w.sample_rate);
  waveform out = w;
  auto pass = [alpha](std::vector<double>& v) {
    double y = v.front();
    for (double& s : v) {
      y += alpha * (s - y);
      s = y;
    }
  };
  pass(out.samples);
  std::reverse(out.samples.begin(), out.samples.end());
  pass(out.samples);
  std::reverse(out.samples.begin(), out.samples.end());
  return out;
}

spike_train extract_peaks(const waveform& w, double height_fraction, std::size_t local_points) {
  if (w.samples.empty()) throw error(errc::invalid_argument, "empty waveform");
  if (!(w.sample_rate > 0.0)) throw error(errc::invalid_argument, "sample_rate must be > 0");
  if (!(height_fraction >= 0.0) || !(height_fraction < 1.0)) {
    throw error(errc::invalid_argument, "height_fraction must lie in [0, 1)");
  }
  if (local_points < 1) throw error(errc::invalid_argument, "local_points must be >= 1");

  double lo = *std::min_element(w.samples.begin(), w.samples.end());
  double hi = *std::max_element(w.samples.begin(), w.samples.end());
  double min_height = lo + height_fraction * (hi - lo);

  spike_train out;
  const auto& v = w.samples;
  if (v.size() < 2 * local_points + 1) return out;
  for (std::size_t i = local_points; i + local_points < v.size(); ++i) {
    if (v[i] <= min_height) continue;
    bool peak = true;
    for (std::size_t k = 1; k <= local_points && peak; ++k) {
      // Strict on the left, ties allowed on the right: a plateau counts once.
      if (!(v[i] > v[i - k] && v[i] >= v[i + k])) peak = false;
    }
    if (peak) out.times.push_back(static_cast<double>(i) / w.sample_rate);
  }
  return out;
}

}  // namespace chaos
