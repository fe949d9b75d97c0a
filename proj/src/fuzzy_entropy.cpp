#include "fuzzy_entropy.hpp"

#include <cmath>
#include <limits>

#include "errors.hpp"

namespace chaos {

namespace {

double pow_r2(double d, double r2) {
  if (r2 == 1.0) return d;
  if (r2 == 2.0) return d * d;
  return std::pow(d, r2);
}

// phi over the first `count` embedded vectors of length `level`.
double phi_level(std::span<const double> series, std::size_t level, std::size_t count, double r1,
                 double r2) {
  // Flat buffer of baseline-subtracted vectors.
  std::vector<double> vecs(count * level);
  for (std::size_t i = 0; i < count; ++i) {
    double mean = 0.0;
    for (std::size_t k = 0; k < level; ++k) mean += series[i + k];
    mean /= static_cast<double>(level);
    for (std::size_t k = 0; k < level; ++k) vecs[i * level + k] = series[i + k] - mean;
  }

  double total = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double* vi = vecs.data() + i * level;
    double inner = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
      if (j == i) continue;
      const double* vj = vecs.data() + j * level;
      double d = 0.0;
      for (std::size_t k = 0; k < level; ++k) {
        double a = std::fabs(vi[k] - vj[k]);
        if (a > d) d = a;
      }
      inner += std::exp(-pow_r2(d, r2) / r1);
    }
    total += inner / static_cast<double>(count - 1);
  }
  return total / static_cast<double>(count);
}

void validate_tolerances(double r1, double r2) {
  if (!(r1 > 0.0)) throw error(errc::invalid_argument, "r1 must be > 0");
  if (!(r2 > 0.0)) throw error(errc::invalid_argument, "r2 must be > 0");
}

}  // namespace

double population_std(std::span<const double> series) {
  if (series.empty()) throw error(errc::invalid_argument, "empty series");
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(series.size());
  double sq = 0.0;
  for (double v : series) sq += (v - mean) * (v - mean);
  return std::sqrt(sq / static_cast<double>(series.size()));
}

std::vector<std::vector<double>> embed(std::span<const double> series, std::size_t m) {
  if (m < 1) throw error(errc::invalid_argument, "m must be >= 1");
  if (series.size() < m) {
    throw error(errc::too_short, "series length " + std::to_string(series.size()) +
                                     " below embedding dimension " + std::to_string(m));
  }
  std::vector<std::vector<double>> out;
  out.reserve(series.size() - m + 1);
  for (std::size_t i = 0; i + m <= series.size(); ++i) {
    double mean = 0.0;
    for (std::size_t k = 0; k < m; ++k) mean += series[i + k];
    mean /= static_cast<double>(m);
    std::vector<double> v(m);
    for (std::size_t k = 0; k < m; ++k) v[k] = series[i + k] - mean;
    out.push_back(std::move(v));
  }
  return out;
}

double chebyshev_distance(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw error(errc::invalid_argument, "vector length mismatch");
  double d = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    double a = std::fabs(u[k] - v[k]);
    if (a > d) d = a;
  }
  return d;
}

double similarity(double d, double r1, double r2) {
  validate_tolerances(r1, r2);
  return std::exp(-pow_r2(d, r2) / r1);
}

double phi(std::span<const double> series, std::size_t m, double r1, double r2) {
  validate_tolerances(r1, r2);
  if (m < 1) throw error(errc::invalid_argument, "m must be >= 1");
  if (series.size() < m + 2) {
    throw error(errc::too_short, "need at least m + 2 samples for phi");
  }
  return phi_level(series, m, series.size() - m, r1, r2);
}

fuzzyen_result fuzzy_en(std::span<const double> series, const fuzzyen_params& params) {
  if (params.m < 1) throw error(errc::invalid_argument, "m must be >= 1");
  if (series.size() < params.m + 2) {
    throw error(errc::too_short, "series length " + std::to_string(series.size()) +
                                     " too short for m=" + std::to_string(params.m));
  }
  double r1 = params.r1;
  if (params.r1_relative) {
    double sd = population_std(series);
    if (sd == 0.0) return {0.0, true, 0};  // constant series: maximally regular
    r1 *= sd;
  }
  validate_tolerances(r1, params.r2);

  std::size_t count = series.size() - params.m;
  double phi_m = phi_level(series, params.m, count, r1, params.r2);
  double phi_m1 = phi_level(series, params.m + 1, count, r1, params.r2);

  constexpr double floor = std::numeric_limits<double>::min();
  fuzzyen_result res;
  if (phi_m < floor) {
    phi_m = floor;
    ++res.clamp_count;
  }
  if (phi_m1 < floor) {
    phi_m1 = floor;
    ++res.clamp_count;
  }
  res.value = std::log(phi_m) - std::log(phi_m1);
  return res;
}

}  // namespace chaos
