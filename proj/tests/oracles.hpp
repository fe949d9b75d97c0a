// Independent reference implementations used as test oracles. These
// deliberately re-derive everything with plain loops and must stay decoupled
// from the code under test.
#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace oracle {

// Direct evaluation of the fuzzy entropy chain: length-m segments shifted by
// their own mean, Chebyshev distances, exp(-d^r2/r1) similarities, phi as the
// mean over i of the mean over j != i, with N - m vectors at both levels.
inline std::vector<std::vector<double>> embed(std::span<const double> t, std::size_t m) {
  std::vector<std::vector<double>> vecs;
  for (std::size_t i = 0; i + m <= t.size(); ++i) {
    double avg = 0.0;
    for (std::size_t k = 0; k < m; ++k) avg += t[i + k];
    avg /= static_cast<double>(m);
    std::vector<double> v;
    for (std::size_t k = 0; k < m; ++k) v.push_back(t[i + k] - avg);
    vecs.push_back(v);
  }
  return vecs;
}

inline double phi_direct(std::span<const double> t, std::size_t level, std::size_t count,
                         double r1, double r2) {
  auto vecs = embed(t, level);
  double outer = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    double inner = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
      if (j == i) continue;
      double d = 0.0;
      for (std::size_t k = 0; k < level; ++k) {
        d = std::max(d, std::fabs(vecs[i][k] - vecs[j][k]));
      }
      inner += std::exp(-std::pow(d, r2) / r1);
    }
    outer += inner / static_cast<double>(count - 1);
  }
  return outer / static_cast<double>(count);
}

inline double fuzzy_en_direct(std::span<const double> t, std::size_t m, double r1, double r2) {
  std::size_t count = t.size() - m;
  double pm = phi_direct(t, m, count, r1, r2);
  double pm1 = phi_direct(t, m + 1, count, r1, r2);
  return std::log(pm) - std::log(pm1);
}

inline double population_std(std::span<const double> t) {
  double mean = 0.0;
  for (double v : t) mean += v;
  mean /= static_cast<double>(t.size());
  double sq = 0.0;
  for (double v : t) sq += (v - mean) * (v - mean);
  return std::sqrt(sq / static_cast<double>(t.size()));
}

// Plain-loop perceptron forward pass.
inline double mlp_forward(std::size_t nl, std::size_t nh, const std::vector<double>& w1,
                          const std::vector<double>& b1, const std::vector<double>& w2, double b2,
                          std::span<const double> x) {
  double out = b2;
  for (std::size_t h = 0; h < nh; ++h) {
    double z = b1[h];
    for (std::size_t k = 0; k < nl; ++k) z += w1[h * nl + k] * x[k];
    out += w2[h] / (1.0 + std::exp(-z));
  }
  return out;
}

}  // namespace oracle
