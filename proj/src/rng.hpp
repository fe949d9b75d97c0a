#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace chaos {

// mt19937_64 with hand-rolled scaling. The standard library's distributions
// are implementation-defined; these are not, so seeded runs reproduce
// bit-for-bit across standard libraries.
class rng {
public:
  explicit rng(std::uint64_t seed) : engine_(seed) {}

  // [0, 1)
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // [0, n); n > 0
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

  template <typename T>
  void shuffle(std::span<T> v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

private:
  std::mt19937_64 engine_;
};

// Stable sub-seed for an indexed task (CV fold, scan lane) of a seeded run.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace chaos
