#pragma once

#include <cstddef>

#include "hr.hpp"

namespace chaos {

struct waveform {
  std::vector<double> samples;
  double sample_rate = 0.0;  // Hz
};

// First-order exponential low-pass, -3 dB at cutoff_hz, applied forward then
// backward so the result is zero-phase (squared magnitude response).
waveform lowpass(const waveform& w, double cutoff_hz);

// Positive local maxima with `local_points` neighbors on each side, kept when
// the height exceeds height_fraction of the global range above the global
// minimum. Peak times are index / sample_rate.
spike_train extract_peaks(const waveform& w, double height_fraction, std::size_t local_points);

}  // namespace chaos
