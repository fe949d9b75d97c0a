#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace chaos {

// Tolerance triple of the fuzzy similarity exp(-d^r2 / r1). With
// r1_relative, r1 is a factor applied to the series' population standard
// deviation; the defaults are the sensitivity-optimal setting.
struct fuzzyen_params {
  std::size_t m = 1;
  double r2 = 1.0;
  double r1 = 0.01;
  bool r1_relative = true;
};

struct fuzzyen_result {
  double value = 0.0;
  bool degenerate = false;       // constant series under relative r1
  std::size_t clamp_count = 0;   // phi values clamped before taking the log
};

double population_std(std::span<const double> series);

// Length-m segments of the series, each shifted by its own mean; components
// of every vector sum to zero.
std::vector<std::vector<double>> embed(std::span<const double> series, std::size_t m);

double chebyshev_distance(std::span<const double> u, std::span<const double> v);

// exp(-d^r2 / r1), in (0, 1] for d >= 0.
double similarity(double d, double r1, double r2);

// Average over i of the average over j != i of the pairwise similarity of
// the first N - m embedded length-m vectors.
double phi(std::span<const double> series, std::size_t m, double r1, double r2);

// ln(phi at m) - ln(phi at m+1), both levels averaged over the same N - m
// vectors. A constant series under relative r1 yields 0 with the degenerate
// flag set instead of a division by zero.
fuzzyen_result fuzzy_en(std::span<const double> series, const fuzzyen_params& params = {});

}  // namespace chaos
