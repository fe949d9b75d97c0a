#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace chaos {

// Control knobs for the three-variable bursting-neuron system
//   x' = y + 3x^2 - x^3 - z + i_ex
//   y' = 1 - 5x^2 - y
//   z' = r (4 (x + 8/5) - z)
// integrated with classical fixed-step RK4.
struct hr_params {
  double r = 0.0055;      // slow-current parameter
  double i_ex = 3.25;     // external current
  double x0 = 0.0;
  double y0 = 0.0;
  double z0 = 0.0;
  double dt = 0.01;
  double t_transient = 1000.0;        // span discarded before spike counting
  std::size_t target_intervals = 500;
  double spike_threshold = 1.0;       // membrane level a local maximum must exceed
  std::size_t max_steps = 100'000'000;
};

struct hr_state {
  double x = 0.0;  // membrane potential
  double y = 0.0;
  double z = 0.0;
};

hr_state hr_derivative(const hr_state& s, double r, double i_ex);
hr_state rk4_step(const hr_state& s, double dt, double r, double i_ex);

struct trajectory {
  std::vector<double> times;      // k * dt, uniform spacing
  std::vector<hr_state> states;
};

struct spike_train {
  std::vector<double> times;  // strictly increasing
};

using interval_series = std::vector<double>;

// Fixed-span integration from (x0, y0, z0); duration 0 yields just the
// initial state.
trajectory integrate_for(const hr_params& p, double duration);

// Integrates until enough spikes past the transient to yield
// target_intervals intervals, storing the full path. Throws errc::step_cap
// if max_steps is reached first (non-spiking parameters) and errc::numeric
// on blow-up.
trajectory integrate(const hr_params& p);

// Streaming variant of integrate + detect_spikes + intervals that keeps only
// the spike times; this is what dataset generation and scans use.
interval_series run_intervals(const hr_params& p);

// Times of strict local maxima of x (x[k] > x[k-1], x[k] >= x[k+1]; a
// plateau counts at its first sample) above `threshold` and after `after`.
spike_train detect_spikes(const trajectory& traj, double threshold, double after);

interval_series intervals(const spike_train& spikes);

struct bifurcation_row {
  double r;
  interval_series intervals;
};

struct bifurcation_result {
  std::vector<bifurcation_row> rows;                     // successes, in input order
  std::vector<std::pair<double, std::string>> failures;  // (r, reason)
};

bifurcation_result bifurcation_scan(double i_ex, std::span<const double> r_values,
                                    std::size_t intervals_per_r, const hr_params& tmpl);

std::string trajectory_csv(const trajectory& traj);
std::string intervals_csv(const interval_series& v);

}  // namespace chaos
