#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace qlm {

// splitmix64 finalizer (Steele/Lea/Vigna). Only used to derive stream seeds;
// the streams themselves are std::mt19937_64, which the standard pins
// bit-exactly across platforms.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed of the index-th independent stream under a base seed.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(base + 0x9E3779B97F4A7C15ULL * index);
}

// Deterministic uniform stream. next_double uses the top 53 bits explicitly
// instead of std::uniform_real_distribution, whose output is
// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Index drawn proportionally to weights (nonnegative, positive total).
  // Zero-weight entries are never returned.
  std::size_t sample_index(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0))
      throw std::invalid_argument("sample_index needs a positive weight total");
    const double u = next_double() * total;
    double acc = 0.0;
    std::size_t last_positive = weights.size();
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] <= 0.0) continue;
      acc += weights[i];
      last_positive = i;
      if (u < acc) return i;
    }
    return last_positive;  // u landed on the rounding tail
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace qlm
