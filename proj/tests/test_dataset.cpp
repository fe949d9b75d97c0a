#include "dataset.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "errors.hpp"
#include "oracles.hpp"
#include "rng.hpp"

using namespace chaos;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

labeled_dataset random_dataset(rng& gen, std::size_t n, std::size_t nl, bool with_r = true) {
  labeled_dataset ds;
  for (std::size_t i = 0; i < n; ++i) {
    window w;
    for (std::size_t k = 0; k < nl; ++k) w.values.push_back(gen.uniform(-10.0, 60.0));
    if (with_r) {
      w.source_r = gen.uniform(0.005, 0.015);
      w.source_i_ex = 3.25;
    } else {
      w.source_tag = i % 2 == 0 ? "rest" : "stim";
    }
    w.start_index = i * 4;
    ds.windows.push_back(std::move(w));
    ds.targets.push_back(gen.uniform(0.0, 5.0));
  }
  ds.stats = compute_stats(ds);
  return ds;
}

}  // namespace

TEST_CASE("windowing a short series") {
  std::vector<double> s{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  windowing_config cfg{5, 5, std::nullopt};
  auto wins = window_series(s, cfg);
  REQUIRE(wins.size() == 2);
  CHECK(wins[0].start_index == 0);
  CHECK(wins[0].values == std::vector<double>{0, 1, 2, 3, 4});
  CHECK(wins[1].start_index == 5);
  CHECK(wins[1].values == std::vector<double>{5, 6, 7, 8, 9});
}

TEST_CASE("windowing with an explicit count") {
  std::vector<double> s(500, 1.0);
  windowing_config cfg{50, 4, 100};
  auto wins = window_series(s, cfg);
  REQUIRE(wins.size() == 100);
  CHECK(wins.back().start_index == 396);
}

TEST_CASE("windowing rejects undersized input") {
  std::vector<double> s(4, 1.0);
  CHECK_THROWS_AS(window_series(s, {5, 1, std::nullopt}), error);
  std::vector<double> s2(100, 1.0);
  CHECK_THROWS_AS(window_series(s2, {50, 4, 100}), error);
}

TEST_CASE("window offsets form an arithmetic progression") {
  rng gen(19);
  for (int rep = 0; rep < 20; ++rep) {
    std::size_t nl = 2 + gen.below(20);
    std::size_t shift = 1 + gen.below(8);
    std::vector<double> s(nl + gen.below(300), 0.0);
    windowing_config cfg{nl, shift, std::nullopt};
    auto wins = window_series(s, cfg);
    REQUIRE(!wins.empty());
    for (std::size_t i = 0; i < wins.size(); ++i) CHECK(wins[i].start_index == i * shift);
    // every full window fits
    CHECK(wins.back().start_index + nl <= s.size());
    CHECK(wins.back().start_index + nl + shift > s.size());
  }
}

TEST_CASE("stats of a single constant window") {
  labeled_dataset ds;
  window w;
  w.values.assign(7, 5.0);
  ds.windows.push_back(w);
  ds.targets.push_back(0.0);
  dataset_stats st = compute_stats(ds);
  CHECK(st.mean == 5.0);
  CHECK(st.window_mean_min == 5.0);
  CHECK(st.window_mean_max == 5.0);
  CHECK(st.min_value == 5.0);
  CHECK(st.max_value == 5.0);
}

TEST_CASE("stats equal a naive flat recomputation") {
  rng gen(41);
  auto ds = random_dataset(gen, 40, 12);
  dataset_stats st = compute_stats(ds);

  double sum = 0.0, mn = 1e300, mx = -1e300, wmn = 1e300, wmx = -1e300;
  std::size_t n = 0;
  for (const auto& w : ds.windows) {
    double wsum = 0.0;
    for (double v : w.values) {
      sum += v;
      wsum += v;
      mn = std::min(mn, v);
      mx = std::max(mx, v);
      ++n;
    }
    wmn = std::min(wmn, wsum / static_cast<double>(w.values.size()));
    wmx = std::max(wmx, wsum / static_cast<double>(w.values.size()));
  }
  CHECK(st.mean == doctest::Approx(sum / static_cast<double>(n)).epsilon(1e-12));
  CHECK(st.min_value == mn);
  CHECK(st.max_value == mx);
  CHECK(st.window_mean_min == doctest::Approx(wmn).epsilon(1e-12));
  CHECK(st.window_mean_max == doctest::Approx(wmx).epsilon(1e-12));
}

TEST_CASE("stats reject an empty dataset") {
  labeled_dataset ds;
  CHECK_THROWS_AS(compute_stats(ds), error);
}

TEST_CASE("single-cell base build labels with its own entropy") {
  base_config cfg;
  cfg.n_r = 1;
  cfg.r_min = 0.0076;
  cfg.r_max = 0.0076;
  cfg.intervals_per_r = 60;
  cfg.windowing = {50, 4, 1};
  labeled_dataset ds = build_base(cfg);
  REQUIRE(ds.size() == 1);
  CHECK(ds.windows[0].source_r == 0.0076);
  CHECK(ds.windows[0].source_i_ex == 3.25);
  CHECK(ds.windows[0].start_index == 0);
  CHECK(ds.targets[0] == doctest::Approx(fuzzy_en(ds.windows[0].values, cfg.fe).value)
                             .epsilon(1e-12));
}

TEST_CASE("base build is ordered, deterministic, and correctly labeled") {
  base_config cfg;
  cfg.n_r = 3;
  cfg.r_min = 0.0055;
  cfg.r_max = 0.0065;
  cfg.intervals_per_r = 80;
  cfg.windowing = {50, 4, 5};
  labeled_dataset a = build_base(cfg);
  labeled_dataset b = build_base(cfg);
  REQUIRE(a.size() == 15);

  // ordering: by r grid position, then by start offset
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(*a.windows[i].source_r ==
          doctest::Approx(0.0055 + 0.0005 * static_cast<double>(i / 5)).epsilon(1e-12));
    CHECK(a.windows[i].start_index == (i % 5) * 4);
  }
  // determinism, including targets
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.targets[i] == b.targets[i]);
    CHECK(a.windows[i].values == b.windows[i].values);
  }
  // labels recompute
  rng gen(43);
  for (int rep = 0; rep < 5; ++rep) {
    std::size_t i = gen.below(a.size());
    CHECK(a.targets[i] ==
          doctest::Approx(fuzzy_en(a.windows[i].values, cfg.fe).value).epsilon(1e-12));
  }
  CHECK(block_lengths(a) == std::vector<std::size_t>{5, 5, 5});
}

TEST_CASE("base build propagates tagged integration failures") {
  base_config cfg;
  cfg.i_ex = 0.0;  // never spikes
  cfg.n_r = 2;
  cfg.hr.max_steps = 100000;
  cfg.intervals_per_r = 60;
  cfg.windowing = {50, 4, 1};
  try {
    build_base(cfg);
    FAIL("expected step_cap");
  } catch (const error& e) {
    CHECK(e.code() == errc::step_cap);
    CHECK(std::string(e.what()).find("r=0.005") != std::string::npos);
  }
}

TEST_CASE("normalization") {
  rng gen(47);
  auto ds = random_dataset(gen, 20, 8);

  SUBCASE("zero mean is the identity") {
    auto out = normalize(ds, 0.0);
    for (std::size_t i = 0; i < ds.size(); ++i) CHECK(out.windows[i].values == ds.windows[i].values);
  }
  SUBCASE("elements shift, targets stay") {
    labeled_dataset tiny;
    window w;
    w.values = {1, 2, 3};
    tiny.windows.push_back(w);
    tiny.targets.push_back(7.0);
    tiny.stats = compute_stats(tiny);
    auto out = normalize(tiny, 2.0);
    CHECK(out.windows[0].values == std::vector<double>{-1, 0, 1});
    CHECK(out.targets[0] == 7.0);
  }
  SUBCASE("stats shift by the subtracted mean") {
    auto out = normalize(ds, 11.5);
    CHECK(out.stats.mean == doctest::Approx(ds.stats.mean - 11.5).epsilon(1e-12));
  }
  SUBCASE("normalization is invertible") {
    auto there = normalize(ds, 3.25);
    auto back = normalize(there, -3.25);
    for (std::size_t i = 0; i < ds.size(); ++i) {
      for (std::size_t k = 0; k < ds.window_len(); ++k) {
        CHECK(back.windows[i].values[k] ==
              doctest::Approx(ds.windows[i].values[k]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("merge") {
  rng gen(53);
  auto a = random_dataset(gen, 10, 6);
  auto b = random_dataset(gen, 14, 6);
  auto c = random_dataset(gen, 5, 6);

  SUBCASE("identity with the empty dataset") {
    labeled_dataset empty;
    auto out = merge(a, empty);
    REQUIRE(out.size() == a.size());
    CHECK(out.stats.mean == a.stats.mean);
    auto out2 = merge(empty, a);
    CHECK(out2.size() == a.size());
  }
  SUBCASE("sizes add and order is a then b") {
    auto out = merge(a, b);
    REQUIRE(out.size() == 24);
    CHECK(out.windows[0].values == a.windows[0].values);
    CHECK(out.windows[10].values == b.windows[0].values);
  }
  SUBCASE("merged mean of equal halves is the midpoint") {
    auto big_b = random_dataset(gen, 10, 6);
    auto out = merge(a, big_b);
    CHECK(out.stats.mean ==
          doctest::Approx((a.stats.mean + big_b.stats.mean) / 2.0).epsilon(1e-12));
    CHECK(out.stats.mean >= std::min(a.stats.mean, big_b.stats.mean));
    CHECK(out.stats.mean <= std::max(a.stats.mean, big_b.stats.mean));
  }
  SUBCASE("associativity of window order") {
    auto ab_c = merge(merge(a, b), c);
    auto a_bc = merge(a, merge(b, c));
    REQUIRE(ab_c.size() == a_bc.size());
    for (std::size_t i = 0; i < ab_c.size(); ++i) {
      CHECK(ab_c.windows[i].values == a_bc.windows[i].values);
      CHECK(ab_c.targets[i] == a_bc.targets[i]);
    }
  }
  SUBCASE("window length mismatch") {
    auto other = random_dataset(gen, 4, 7);
    CHECK_THROWS_AS(merge(a, other), error);
  }
}

TEST_CASE("dataset csv round trip") {
  rng gen(59);
  SUBCASE("model-sourced windows") {
    auto ds = random_dataset(gen, 25, 9);
    std::string path = temp_path("ds_roundtrip.csv");
    save_dataset(ds, path);
    auto back = load_dataset(path);
    REQUIRE(back.size() == ds.size());
    REQUIRE(back.window_len() == ds.window_len());
    for (std::size_t i = 0; i < ds.size(); ++i) {
      CHECK(back.windows[i].start_index == ds.windows[i].start_index);
      CHECK(back.windows[i].source_tag == ds.windows[i].source_tag);
      REQUIRE(back.windows[i].source_r.has_value());
      CHECK(*back.windows[i].source_r ==
            doctest::Approx(*ds.windows[i].source_r).epsilon(1e-14));
      CHECK(back.targets[i] == doctest::Approx(ds.targets[i]).epsilon(1e-14));
      for (std::size_t k = 0; k < ds.window_len(); ++k) {
        CHECK(back.windows[i].values[k] ==
              doctest::Approx(ds.windows[i].values[k]).epsilon(1e-14));
      }
    }
    std::remove(path.c_str());
  }
  SUBCASE("experimental windows keep empty r fields") {
    auto ds = random_dataset(gen, 8, 5, false);
    std::string path = temp_path("ds_exp_roundtrip.csv");
    save_dataset(ds, path);
    auto back = load_dataset(path);
    REQUIRE(back.size() == 8);
    CHECK(!back.windows[0].source_r.has_value());
    CHECK(!back.windows[0].source_i_ex.has_value());
    CHECK(back.windows[0].source_tag == "rest");
    CHECK(back.windows[1].source_tag == "stim");
    CHECK(block_lengths(back).size() == 8);  // alternating tags
    std::remove(path.c_str());
  }
}

TEST_CASE("dataset csv row count and shape") {
  rng gen(61);
  auto ds = random_dataset(gen, 12, 4);
  std::string text = dataset_csv(ds);
  std::size_t lines = 0;
  for (char c : text) lines += c == '\n';
  CHECK(lines == 13);  // header + one row per window
  CHECK(text.rfind("tag,r,i_ex,start,target,v1,v2,v3,v4\n", 0) == 0);
}

TEST_CASE("ragged dataset files are rejected") {
  std::string path = temp_path("ds_ragged.csv");
  csv::atomic_write_text(path,
                         "tag,r,i_ex,start,target,v1,v2\n"
                         ",0.005,3.25,0,1.0,1,2\n"
                         ",0.005,3.25,4,1.0,1\n");
  CHECK_THROWS_AS(load_dataset(path), error);
  std::remove(path.c_str());
}

TEST_CASE("missing dataset file raises io") {
  try {
    load_dataset(temp_path("definitely_not_here.csv"));
    FAIL("expected io error");
  } catch (const error& e) {
    CHECK(e.code() == errc::io);
  }
}

TEST_CASE("experimental base windows every source that fits") {
  fuzzyen_params fe;
  SUBCASE("51 periods yield two windows at unit shift") {
    rng gen(67);
    period_source src{"rest", {}};
    for (int i = 0; i < 51; ++i) src.values.push_back(gen.uniform(0.5, 2.0));
    auto res = build_experimental(std::vector<period_source>{src}, {50, 1, std::nullopt}, fe);
    CHECK(res.ds.size() == 2);
    CHECK(res.skipped.empty());
    CHECK(res.ds.windows[0].source_tag == "rest");
    CHECK(!res.ds.windows[0].source_r.has_value());
  }
  SUBCASE("window count sums over sources; short ones are skipped") {
    rng gen(71);
    std::vector<period_source> srcs;
    std::size_t want = 0;
    for (int s = 0; s < 4; ++s) {
      period_source src{"tag" + std::to_string(s), {}};
      std::size_t len = 10 + gen.below(120);
      for (std::size_t i = 0; i < len; ++i) src.values.push_back(gen.uniform(0.5, 2.0));
      if (len >= 50) want += len - 50 + 1;
      srcs.push_back(std::move(src));
    }
    auto res = build_experimental(srcs, {50, 1, std::nullopt}, fe);
    CHECK(res.ds.size() == want);
    std::size_t n_short = 0;
    for (const auto& s : srcs) n_short += s.values.size() < 50;
    CHECK(res.skipped.size() == n_short);
    // every target is that window's own entropy
    for (std::size_t i = 0; i < res.ds.size(); i += 37) {
      CHECK(res.ds.targets[i] ==
            doctest::Approx(fuzzy_en(res.ds.windows[i].values, fe).value).epsilon(1e-12));
    }
  }
}
