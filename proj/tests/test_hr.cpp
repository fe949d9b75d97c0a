#include "hr.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "errors.hpp"
#include "fuzzy_entropy.hpp"
#include "rng.hpp"

using namespace chaos;

TEST_CASE("derivative at the origin") {
  hr_state d = hr_derivative({0, 0, 0}, 0.0055, 3.25);
  CHECK(d.x == doctest::Approx(3.25).epsilon(1e-15));
  CHECK(d.y == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d.z == doctest::Approx(0.0352).epsilon(1e-12));
}

TEST_CASE("derivative at (1,0,0) without drive") {
  hr_state d = hr_derivative({1, 0, 0}, 0.01, 0.0);
  CHECK(d.x == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(d.y == doctest::Approx(-4.0).epsilon(1e-15));
  CHECK(d.z == doctest::Approx(0.104).epsilon(1e-12));
}

TEST_CASE("constructed equilibrium") {
  hr_state d = hr_derivative({-1.6, -11.8, 0.0}, 0.042, 0.024);
  CHECK(std::fabs(d.x) < 1e-12);
  CHECK(std::fabs(d.y) < 1e-12);
  CHECK(std::fabs(d.z) < 1e-12);
}

TEST_CASE("zero span keeps only the initial state") {
  hr_params p;
  p.x0 = 0.3;
  p.y0 = -0.2;
  p.z0 = 1.5;
  trajectory t = integrate_for(p, 0.0);
  REQUIRE(t.times.size() == 1);
  CHECK(t.times[0] == 0.0);
  CHECK(t.states[0].x == 0.3);
  CHECK(t.states[0].y == -0.2);
  CHECK(t.states[0].z == 1.5);
}

TEST_CASE("single step matches the hand-derived value") {
  hr_params p;
  p.r = 0.0055;
  p.i_ex = 3.25;
  p.dt = 0.1;
  trajectory t = integrate_for(p, 0.1);
  REQUIRE(t.states.size() == 2);
  // One classical RK4 step from the origin, evaluated independently.
  CHECK(t.states[1].x == doctest::Approx(0.3394246996830977).epsilon(1e-14));
  CHECK(t.states[1].y == doctest::Approx(0.07700534044785351).epsilon(1e-14));
  CHECK(t.states[1].z == doctest::Approx(0.0038853632024687126).epsilon(1e-13));
}

TEST_CASE("bursting waveform at the reference parameters") {
  hr_params p;
  p.r = 0.0055;
  p.target_intervals = 60;
  trajectory traj = integrate(p);
  spike_train spikes = detect_spikes(traj, p.spike_threshold, p.t_transient);
  interval_series isi = intervals(spikes);
  REQUIRE(isi.size() >= 60);

  double x_max = -1e300;
  double x_min = 1e300;
  for (const auto& s : traj.states) {
    x_max = std::max(x_max, s.x);
    x_min = std::min(x_min, s.x);
  }
  CHECK(x_max > 1.5);  // spike peaks near 2
  CHECK(x_max < 2.5);
  CHECK(x_min < 0.0);  // quiescent phases dip below zero

  double mean = 0.0;
  for (double v : isi) mean += v;
  mean /= static_cast<double>(isi.size());
  CHECK(mean > 29.7);
  CHECK(mean < 36.3);
}

TEST_CASE("integration failures are typed") {
  hr_params p;
  SUBCASE("non-spiking parameters hit the step cap") {
    p.i_ex = 0.0;  // subthreshold: never spikes
    p.max_steps = 200000;
    p.target_intervals = 5;
    try {
      run_intervals(p);
      FAIL("expected step_cap");
    } catch (const error& e) {
      CHECK(e.code() == errc::step_cap);
    }
  }
  SUBCASE("oversized step blows up") {
    p.dt = 10.0;
    p.target_intervals = 5;
    try {
      run_intervals(p);
      FAIL("expected numeric");
    } catch (const error& e) {
      CHECK(e.code() == errc::numeric);
    }
  }
  SUBCASE("parameter validation") {
    p.r = -1.0;
    CHECK_THROWS_AS(run_intervals(p), error);
  }
}

TEST_CASE("spike detection on a constant trace") {
  trajectory t;
  for (int k = 0; k < 100; ++k) {
    t.times.push_back(k * 0.01);
    t.states.push_back({0.5, 0, 0});
  }
  CHECK(detect_spikes(t, 1.0, 0.0).times.empty());
}

TEST_CASE("spike detection recovers sine maxima") {
  trajectory t;
  double dt = 0.01;
  for (int k = 0; k < 3000; ++k) {
    t.times.push_back(k * dt);
    t.states.push_back({std::sin(k * dt), 0, 0});
  }
  spike_train s = detect_spikes(t, 0.5, 0.0);
  REQUIRE(s.times.size() == 5);
  double pi = 3.14159265358979323846;
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    double expected = pi / 2 + 2 * pi * static_cast<double>(i);
    CHECK(std::fabs(s.times[i] - expected) <= dt);
  }
}

TEST_CASE("plateau counts once, at its first sample") {
  trajectory t;
  double xs[] = {0.0, 2.0, 2.0, 0.5, 0.0};
  for (int k = 0; k < 5; ++k) {
    t.times.push_back(k * 1.0);
    t.states.push_back({xs[k], 0, 0});
  }
  spike_train s = detect_spikes(t, 1.0, 0.0);
  REQUIRE(s.times.size() == 1);
  CHECK(s.times[0] == 1.0);
}

TEST_CASE("intervals of consecutive spikes") {
  CHECK(intervals({{0.0, 1.0, 2.0}}) == interval_series{1.0, 1.0});
  CHECK(intervals({{5.0}}).empty());
  CHECK(intervals({{}}).empty());
}

TEST_CASE("intervals of random monotone trains are positive") {
  rng gen(42);
  for (int rep = 0; rep < 50; ++rep) {
    spike_train s;
    double t = gen.uniform(0.1, 1.0);
    std::size_t n = 2 + gen.below(20);
    for (std::size_t i = 0; i < n; ++i) {
      s.times.push_back(t);
      t += gen.uniform(0.01, 3.0);
    }
    interval_series isi = intervals(s);
    REQUIRE(isi.size() == s.times.size() - 1);
    for (double v : isi) CHECK(v > 0.0);
  }
}

TEST_CASE("detected spikes lie inside the trajectory span") {
  hr_params p;
  p.r = 0.006;
  p.target_intervals = 30;
  trajectory traj = integrate(p);
  spike_train s = detect_spikes(traj, p.spike_threshold, p.t_transient);
  REQUIRE(!s.times.empty());
  for (double st : s.times) {
    CHECK(st > traj.times.front());
    CHECK(st < traj.times.back());
  }
  for (double v : intervals(s)) CHECK(v > 0.0);
}

TEST_CASE("fourth-order step error shrinks ~16x when dt halves") {
  auto state_at = [](double dt) {
    hr_params p;
    p.r = 0.0055;
    p.dt = dt;
    return integrate_for(p, 1.0).states.back();
  };
  hr_state ref = state_at(0.0001);
  auto err = [&](const hr_state& s) {
    return std::sqrt((s.x - ref.x) * (s.x - ref.x) + (s.y - ref.y) * (s.y - ref.y) +
                     (s.z - ref.z) * (s.z - ref.z));
  };
  double e_coarse = err(state_at(0.02));
  double e_fine = err(state_at(0.01));
  double ratio = e_coarse / e_fine;
  CHECK(ratio > 8.0);
  CHECK(ratio < 32.0);
}

TEST_CASE("integration is deterministic") {
  hr_params p;
  p.r = 0.0071;
  p.target_intervals = 20;
  trajectory a = integrate(p);
  trajectory b = integrate(p);
  REQUIRE(a.times.size() == b.times.size());
  for (std::size_t k = 0; k < a.times.size(); ++k) {
    CHECK(a.states[k].x == b.states[k].x);
    CHECK(a.states[k].y == b.states[k].y);
    CHECK(a.states[k].z == b.states[k].z);
  }
}

namespace {

double mean_window_entropy(double r, std::size_t n_intervals) {
  hr_params p;
  p.r = r;
  p.target_intervals = n_intervals;
  interval_series isi = run_intervals(p);
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t start = 0; start + 50 <= isi.size(); start += 4) {
    std::span<const double> w(isi.data() + start, 50);
    sum += fuzzy_en(w).value;
    ++n;
  }
  return sum / static_cast<double>(n);
}

}  // namespace

TEST_CASE("regime lists separate cleanly by window entropy") {
  // Interval std does not separate these regimes (regular bursting mixes
  // short and long intervals), so the discriminating statistic is the mean
  // fuzzy entropy of the windows.
  const double chaotic[] = {0.0056, 0.0076, 0.0082, 0.0119, 0.0141};
  const double regular[] = {0.0068, 0.0070, 0.0099, 0.0105, 0.0108};
  double min_chaotic = 1e300;
  double max_regular = -1e300;
  for (double r : chaotic) min_chaotic = std::min(min_chaotic, mean_window_entropy(r, 150));
  for (double r : regular) max_regular = std::max(max_regular, mean_window_entropy(r, 150));
  CHECK(min_chaotic > max_regular + 1.0);
}

TEST_CASE("bifurcation scan") {
  hr_params tmpl;
  SUBCASE("empty grid yields an empty result") {
    bifurcation_result res = bifurcation_scan(3.25, {}, 10, tmpl);
    CHECK(res.rows.empty());
    CHECK(res.failures.empty());
  }
  SUBCASE("row per r, ordered as the input") {
    const double rs[] = {0.0055, 0.0060, 0.0065};
    bifurcation_result res = bifurcation_scan(3.25, rs, 5, tmpl);
    REQUIRE(res.rows.size() == 3);
    CHECK(res.failures.empty());
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(res.rows[i].r == rs[i]);
      CHECK(res.rows[i].intervals.size() == 5);
    }
  }
  SUBCASE("failures carry the offending r") {
    tmpl.max_steps = 100000;
    const double rs[] = {0.0055};
    bifurcation_result res = bifurcation_scan(0.0, rs, 5, tmpl);  // no drive: no spikes
    CHECK(res.rows.empty());
    REQUIRE(res.failures.size() == 1);
    CHECK(res.failures[0].first == 0.0055);
    CHECK(!res.failures[0].second.empty());
  }
}

TEST_CASE("regular orbits cluster into few distinct intervals") {
  auto distinct = [](double r) {
    hr_params p;
    p.r = r;
    p.target_intervals = 150;
    interval_series isi = run_intervals(p);
    std::set<long> buckets;
    for (double v : isi) buckets.insert(std::lround(v * 2.0));  // 0.5-unit bins
    return buckets.size();
  };
  std::size_t regular = distinct(0.0068);
  std::size_t chaotic = distinct(0.0056);
  CHECK(regular <= 12);
  CHECK(chaotic >= 25);
  CHECK(regular * 2 < chaotic);
}

TEST_CASE("csv exports") {
  trajectory t;
  t.times = {0.0, 0.01};
  t.states = {{1, 2, 3}, {4, 5, 6}};
  std::string csv = trajectory_csv(t);
  CHECK(csv == "t,x,y,z\n0,1,2,3\n0.01,4,5,6\n");
  CHECK(intervals_csv({1.5, 2.5}) == "index,interval\n0,1.5\n1,2.5\n");
}
