#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace xot {

// Deterministic splitmix64 generator. Used instead of <random> engines so that
// seeded runs are byte-identical across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // Independent per-round stream: round k uses state seed + (k+1)*golden,
  // so batches of rounds can be generated in any order.
  static Rng for_round(std::uint64_t seed, std::uint64_t round) {
    return Rng(seed + (round + 1) * 0x9E3779B97F4A7C15ULL);
  }

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53 significant bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n).
  int uniform_int(int n) {
    if (n <= 0) throw std::invalid_argument("Rng::uniform_int: n must be positive");
    return static_cast<int>(next() % static_cast<std::uint64_t>(n));
  }

  int bit() { return static_cast<int>(next() >> 63); }

  // Samples an index from an unnormalised probability vector. Tiny negative
  // entries from floating-point cancellation are clamped to zero.
  int sample(std::span<const double> probs) {
    double total = 0.0;
    for (double p : probs) total += (p > 0.0 ? p : 0.0);
    if (total <= 0.0) throw std::invalid_argument("Rng::sample: all probabilities vanish");
    double u = uniform() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      acc += (probs[i] > 0.0 ? probs[i] : 0.0);
      if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size() - 1);
  }

  int sample(const std::vector<double>& probs) {
    return sample(std::span<const double>(probs));
  }

 private:
  std::uint64_t state_;
};

}  // namespace xot
