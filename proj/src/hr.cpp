#include "hr.hpp"

#include <cmath>
#include <sstream>

#include "csv.hpp"
#include "errors.hpp"
#include "parallel.hpp"

namespace chaos {

namespace {

void validate(const hr_params& p) {
  if (!(p.dt > 0.0)) throw error(errc::invalid_argument, "dt must be > 0");
  if (!(p.r > 0.0)) throw error(errc::invalid_argument, "r must be > 0");
  if (!(p.t_transient >= 0.0)) throw error(errc::invalid_argument, "t_transient must be >= 0");
  if (p.target_intervals < 1) throw error(errc::invalid_argument, "target_intervals must be >= 1");
}

bool finite(const hr_state& s) {
  return std::isfinite(s.x) && std::isfinite(s.y) && std::isfinite(s.z);
}

// Online edition of the detect_spikes rule: decides sample k once sample k+1
// is known. Both paths must agree, so the condition lives here only.
struct spike_detector {
  double threshold;
  double after;
  double x_prev2 = 0.0, x_prev1 = 0.0;
  std::size_t seen = 0;

  // Feeds sample (t, x); returns true when sample at t - dt was a spike.
  bool push(double t, double dt, double x) {
    bool hit = false;
    if (seen >= 2) {
      double t_mid = t - dt;
      hit = x_prev1 > x_prev2 && x_prev1 >= x && x_prev1 > threshold && t_mid > after;
    }
    x_prev2 = x_prev1;
    x_prev1 = x;
    ++seen;
    return hit;
  }
};

}  // namespace

hr_state hr_derivative(const hr_state& s, double r, double i_ex) {
  return {
      s.y + 3.0 * s.x * s.x - s.x * s.x * s.x - s.z + i_ex,
      1.0 - 5.0 * s.x * s.x - s.y,
      r * (4.0 * (s.x + 8.0 / 5.0) - s.z),
  };
}

hr_state rk4_step(const hr_state& s, double dt, double r, double i_ex) {
  auto add = [](const hr_state& a, double c, const hr_state& b) {
    return hr_state{a.x + c * b.x, a.y + c * b.y, a.z + c * b.z};
  };
  hr_state k1 = hr_derivative(s, r, i_ex);
  hr_state k2 = hr_derivative(add(s, dt / 2.0, k1), r, i_ex);
  hr_state k3 = hr_derivative(add(s, dt / 2.0, k2), r, i_ex);
  hr_state k4 = hr_derivative(add(s, dt, k3), r, i_ex);
  return {
      s.x + dt / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
      s.y + dt / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y),
      s.z + dt / 6.0 * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z),
  };
}

trajectory integrate_for(const hr_params& p, double duration) {
  validate(p);
  if (duration < 0.0) throw error(errc::invalid_argument, "duration must be >= 0");
  std::size_t steps = static_cast<std::size_t>(std::llround(duration / p.dt));
  trajectory traj;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  hr_state s{p.x0, p.y0, p.z0};
  traj.times.push_back(0.0);
  traj.states.push_back(s);
  for (std::size_t k = 1; k <= steps; ++k) {
    s = rk4_step(s, p.dt, p.r, p.i_ex);
    if (!finite(s)) {
      throw error(errc::numeric, "state became non-finite at t=" + std::to_string(k * p.dt) +
                                     " (dt too large?)");
    }
    traj.times.push_back(static_cast<double>(k) * p.dt);
    traj.states.push_back(s);
  }
  return traj;
}

trajectory integrate(const hr_params& p) {
  validate(p);
  trajectory traj;
  hr_state s{p.x0, p.y0, p.z0};
  traj.times.push_back(0.0);
  traj.states.push_back(s);
  spike_detector det{p.spike_threshold, p.t_transient};
  det.push(0.0, p.dt, s.x);
  std::size_t spikes = 0;
  for (std::size_t k = 1; k <= p.max_steps; ++k) {
    double t = static_cast<double>(k) * p.dt;
    s = rk4_step(s, p.dt, p.r, p.i_ex);
    if (!finite(s)) {
      throw error(errc::numeric,
                  "state became non-finite at t=" + std::to_string(t) + " (dt too large?)");
    }
    traj.times.push_back(t);
    traj.states.push_back(s);
    if (det.push(t, p.dt, s.x)) {
      ++spikes;
      if (spikes >= p.target_intervals + 1) return traj;
    }
  }
  throw error(errc::step_cap, "step cap reached before " + std::to_string(p.target_intervals) +
                                  " intervals at r=" + csv::format_double(p.r, 12) +
                                  " (non-spiking parameters?)");
}

interval_series run_intervals(const hr_params& p) {
  validate(p);
  hr_state s{p.x0, p.y0, p.z0};
  spike_detector det{p.spike_threshold, p.t_transient};
  det.push(0.0, p.dt, s.x);
  std::vector<double> spike_times;
  spike_times.reserve(p.target_intervals + 1);
  for (std::size_t k = 1; k <= p.max_steps; ++k) {
    double t = static_cast<double>(k) * p.dt;
    s = rk4_step(s, p.dt, p.r, p.i_ex);
    if (!finite(s)) {
      throw error(errc::numeric,
                  "state became non-finite at t=" + std::to_string(t) + " (dt too large?)");
    }
    if (det.push(t, p.dt, s.x)) {
      spike_times.push_back(t - p.dt);
      if (spike_times.size() >= p.target_intervals + 1) {
        spike_train train{std::move(spike_times)};
        return intervals(train);
      }
    }
  }
  throw error(errc::step_cap, "step cap reached before " + std::to_string(p.target_intervals) +
                                  " intervals at r=" + csv::format_double(p.r, 12) +
                                  " (non-spiking parameters?)");
}

spike_train detect_spikes(const trajectory& traj, double threshold, double after) {
  if (traj.times.empty()) throw error(errc::invalid_argument, "empty trajectory");
  spike_train out;
  for (std::size_t k = 1; k + 1 < traj.times.size(); ++k) {
    double x = traj.states[k].x;
    if (x > traj.states[k - 1].x && x >= traj.states[k + 1].x && x > threshold &&
        traj.times[k] > after) {
      out.times.push_back(traj.times[k]);
    }
  }
  return out;
}

interval_series intervals(const spike_train& spikes) {
  interval_series out;
  if (spikes.times.size() < 2) return out;
  out.reserve(spikes.times.size() - 1);
  for (std::size_t i = 1; i < spikes.times.size(); ++i) {
    out.push_back(spikes.times[i] - spikes.times[i - 1]);
  }
  return out;
}

bifurcation_result bifurcation_scan(double i_ex, std::span<const double> r_values,
                                    std::size_t intervals_per_r, const hr_params& tmpl) {
  struct slot {
    bool ok = false;
    interval_series series;
    std::string err;
  };
  std::vector<slot> slots(r_values.size());
  parallel_for(r_values.size(), [&](std::size_t i) {
    hr_params p = tmpl;
    p.r = r_values[i];
    p.i_ex = i_ex;
    p.target_intervals = intervals_per_r;
    try {
      slots[i].series = run_intervals(p);
      slots[i].ok = true;
    } catch (const error& e) {
      slots[i].err = e.what();
    }
  });

  bifurcation_result out;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].ok) {
      out.rows.push_back({r_values[i], std::move(slots[i].series)});
    } else {
      out.failures.emplace_back(r_values[i], std::move(slots[i].err));
    }
  }
  return out;
}

std::string trajectory_csv(const trajectory& traj) {
  std::ostringstream ss;
  ss << "t,x,y,z\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    ss << csv::format_double(traj.times[k], 15) << ',' << csv::format_double(traj.states[k].x, 15)
       << ',' << csv::format_double(traj.states[k].y, 15) << ','
       << csv::format_double(traj.states[k].z, 15) << '\n';
  }
  return ss.str();
}

std::string intervals_csv(const interval_series& v) {
  std::ostringstream ss;
  ss << "index,interval\n";
  for (std::size_t i = 0; i < v.size(); ++i) {
    ss << i << ',' << csv::format_double(v[i], 15) << '\n';
  }
  return ss.str();
}

}  // namespace chaos
