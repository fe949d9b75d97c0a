#include "fuzzy_entropy.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

#include "errors.hpp"
#include "hr.hpp"
#include "oracles.hpp"
#include "rng.hpp"

using namespace chaos;

namespace {

std::vector<double> random_series(rng& gen, std::size_t n, double lo = -5.0, double hi = 5.0) {
  std::vector<double> v(n);
  for (double& x : v) x = gen.uniform(lo, hi);
  return v;
}

}  // namespace

TEST_CASE("embedding of a short ramp") {
  std::vector<double> t{1, 2, 3};
  auto vecs = embed(t, 2);
  REQUIRE(vecs.size() == 2);
  CHECK(vecs[0][0] == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(vecs[0][1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(vecs[1][0] == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(vecs[1][1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("m=1 embedding collapses to zero vectors") {
  rng gen(7);
  auto t = random_series(gen, 20);
  for (const auto& v : embed(t, 1)) {
    REQUIRE(v.size() == 1);
    CHECK(v[0] == 0.0);
  }
}

TEST_CASE("embedding matches the direct formula and sums to zero") {
  rng gen(11);
  for (int rep = 0; rep < 20; ++rep) {
    std::size_t n = 5 + gen.below(40);
    std::size_t m = 1 + gen.below(4);
    auto t = random_series(gen, n);
    auto got = embed(t, m);
    auto want = oracle::embed(t, m);
    REQUIRE(got.size() == want.size());
    REQUIRE(got.size() == n - m + 1);
    for (std::size_t i = 0; i < got.size(); ++i) {
      double sum = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        CHECK(got[i][k] == doctest::Approx(want[i][k]).epsilon(1e-12));
        sum += got[i][k];
      }
      CHECK(std::fabs(sum) < 1e-12);
    }
  }
}

TEST_CASE("embedding requires enough samples") {
  std::vector<double> t{1, 2};
  CHECK_THROWS_AS(embed(t, 3), error);
}

TEST_CASE("chebyshev distance") {
  std::vector<double> u{1, 2}, v{4, 0};
  CHECK(chebyshev_distance(u, u) == 0.0);
  CHECK(chebyshev_distance(u, v) == 3.0);
  std::vector<double> w{1, 2, 3};
  CHECK_THROWS_AS(chebyshev_distance(u, w), error);

  rng gen(3);
  for (int rep = 0; rep < 50; ++rep) {
    std::size_t n = 1 + gen.below(10);
    auto a = random_series(gen, n);
    auto b = random_series(gen, n);
    double want = 0.0;
    for (std::size_t k = 0; k < n; ++k) want = std::max(want, std::fabs(a[k] - b[k]));
    CHECK(chebyshev_distance(a, b) == want);
  }
}

TEST_CASE("similarity function") {
  CHECK(similarity(0.0, 0.3, 1.0) == 1.0);
  CHECK(similarity(0.2, 0.2, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK_THROWS_AS(similarity(1.0, 0.0, 1.0), error);
  CHECK_THROWS_AS(similarity(1.0, -0.5, 1.0), error);

  rng gen(5);
  for (int rep = 0; rep < 100; ++rep) {
    double d1 = gen.uniform(0.0, 4.0);
    double d2 = d1 + gen.uniform(1e-6, 4.0);
    double r1 = gen.uniform(0.01, 2.0);
    double r2 = gen.uniform(0.2, 4.0);
    CHECK(similarity(d1, r1, r2) > similarity(d2, r1, r2));
  }
}

TEST_CASE("phi is exactly one for m=1") {
  rng gen(13);
  for (int rep = 0; rep < 100; ++rep) {
    auto t = random_series(gen, 3 + gen.below(60));
    CHECK(std::fabs(phi(t, 1, 0.2, 1.0) - 1.0) < 1e-12);
  }
}

TEST_CASE("phi of a constant series is one") {
  std::vector<double> t(30, 4.2);
  CHECK(phi(t, 1, 0.1, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(phi(t, 3, 0.1, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("phi matches the direct double loop") {
  rng gen(17);
  for (int rep = 0; rep < 30; ++rep) {
    std::size_t m = 1 + gen.below(3);
    auto t = random_series(gen, m + 4 + gen.below(40));
    double r1 = gen.uniform(0.05, 1.0);
    double r2 = gen.uniform(0.5, 3.0);
    double want = oracle::phi_direct(t, m, t.size() - m, r1, r2);
    CHECK(phi(t, m, r1, r2) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("phi precondition") {
  std::vector<double> t{1, 2, 3};
  CHECK_THROWS_AS(phi(t, 2, 0.1, 1.0), error);
}

TEST_CASE("frozen entropy constants") {
  // Values computed with an independent direct evaluation before the build.
  fuzzyen_params p;
  p.r1_relative = false;

  std::vector<double> ramp{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  p.m = 1;
  p.r1 = 0.2;
  p.r2 = 1.0;
  // A linear ramp embeds into identical vectors at m=1 and m=2.
  CHECK(std::fabs(fuzzy_en(ramp, p).value - 0.0) < 1e-12);

  std::vector<double> s2{2.0, 5.5, 1.25, 7.0, 3.5, 8.25, 0.5, 6.75, 4.0, 9.5, 2.75, 5.0};
  p.r1 = 0.3;
  CHECK(fuzzy_en(s2, p).value == doctest::Approx(2.859939702777565).epsilon(1e-12));

  p.m = 2;
  p.r1 = 0.5;
  p.r2 = 2.0;
  CHECK(fuzzy_en(s2, p).value == doctest::Approx(1.5244990284208864).epsilon(1e-12));

  CHECK(population_std(s2) == doctest::Approx(2.714416245817055).epsilon(1e-14));
  fuzzyen_params rel;  // defaults: m=1, r2=1, r1 = 0.01 * std
  CHECK(fuzzy_en(s2, rel).value == doctest::Approx(8.602025218372946).epsilon(1e-12));
}

TEST_CASE("constant series handling") {
  std::vector<double> t(20, 3.0);
  SUBCASE("absolute tolerance gives zero without flags") {
    fuzzyen_params p;
    p.r1 = 0.1;
    p.r1_relative = false;
    auto res = fuzzy_en(t, p);
    CHECK(res.value == 0.0);
    CHECK(!res.degenerate);
  }
  SUBCASE("relative tolerance flags the degenerate std") {
    auto res = fuzzy_en(t, {});
    CHECK(res.value == 0.0);
    CHECK(res.degenerate);
  }
}

TEST_CASE("series too short") {
  std::vector<double> t{1.0, 2.0};
  CHECK_THROWS_AS(fuzzy_en(t, {}), error);
}

TEST_CASE("oracle equivalence over random series and parameters") {
  rng gen(23);
  for (int rep = 0; rep < 200; ++rep) {
    std::size_t n = 10 + gen.below(91);
    auto t = random_series(gen, n);
    fuzzyen_params p;
    p.m = 1 + gen.below(3);
    p.r2 = gen.uniform(0.5, 3.0);
    p.r1 = gen.uniform(0.05, 1.5);
    p.r1_relative = false;
    double want = oracle::fuzzy_en_direct(t, p.m, p.r1, p.r2);
    CHECK(fuzzy_en(t, p).value == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("shift invariance under absolute tolerance") {
  fuzzyen_params p;
  p.m = 2;
  p.r1 = 0.4;
  p.r1_relative = false;

  SUBCASE("integer data shifts exactly") {
    std::vector<double> t{3, 7, 1, 9, 4, 8, 2, 6, 5, 10};
    std::vector<double> shifted = t;
    for (double& v : shifted) v += 16.0;
    CHECK(fuzzy_en(t, p).value == fuzzy_en(shifted, p).value);
  }
  SUBCASE("random data shifts to rounding error") {
    rng gen(29);
    for (int rep = 0; rep < 20; ++rep) {
      auto t = random_series(gen, 10 + gen.below(30));
      double c = gen.uniform(-20.0, 20.0);
      auto shifted = t;
      for (double& v : shifted) v += c;
      CHECK(fuzzy_en(t, p).value == doctest::Approx(fuzzy_en(shifted, p).value).epsilon(1e-9));
    }
  }
}

TEST_CASE("entropy is finite and non-negative when nothing clamps") {
  rng gen(31);
  std::size_t checked = 0;
  for (int rep = 0; rep < 200; ++rep) {
    auto t = random_series(gen, 10 + gen.below(60));
    fuzzyen_params p;
    p.m = 1 + gen.below(2);
    p.r1 = gen.uniform(0.05, 1.0);
    p.r1_relative = false;
    auto res = fuzzy_en(t, p);
    if (res.clamp_count == 0) {
      CHECK(std::isfinite(res.value));
      CHECK(res.value >= 0.0);
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("relative mode equals absolute mode at 0.01 std") {
  rng gen(37);
  for (int rep = 0; rep < 20; ++rep) {
    auto t = random_series(gen, 15 + gen.below(40));
    fuzzyen_params rel;  // defaults
    fuzzyen_params abs;
    abs.r1 = 0.01 * oracle::population_std(t);
    abs.r1_relative = false;
    CHECK(fuzzy_en(t, rel).value == doctest::Approx(fuzzy_en(t, abs).value).epsilon(1e-12));
  }
}

TEST_CASE("chaotic windows carry far more entropy than regular ones") {
  // 100 windows of 50 intervals, shifted by 4, as in the dataset generator.
  auto window_mean = [](double r) {
    hr_params p;
    p.r = r;
    p.target_intervals = 450;
    interval_series isi = run_intervals(p);
    double sum = 0.0;
    for (std::size_t w = 0; w < 100; ++w) {
      sum += fuzzy_en(std::span<const double>(isi.data() + 4 * w, 50)).value;
    }
    return sum / 100.0;
  };
  double chaotic = window_mean(0.0076);
  double regular = window_mean(0.0068);
  CHECK(chaotic > 3.48);   // reported chaotic mean 3.98 +- 0.5
  CHECK(chaotic < 4.48);
  CHECK(regular > 0.83);   // reported regular mean 1.33 +- 0.5
  CHECK(regular < 1.83);
}
