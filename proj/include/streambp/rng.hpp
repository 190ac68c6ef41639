#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace streambp {

// Named substreams. Each consumer of randomness draws from its own stream so
// that, e.g., changing the noise level never perturbs the sampled graph.
enum class RngStream : std::uint64_t {
  kLabels = 1,
  kNoise = 2,
  kEdges = 3,
  kPermutation = 4,
  kSummaryInit = 5,
  kSummaryNoise = 6,
  kTrial = 7,
  kOther = 8,
};

std::uint64_t splitmix64(std::uint64_t x);

// Seed for substream `stream` of master seed `seed`, optionally indexed.
std::uint64_t derive_seed(std::uint64_t seed, RngStream stream, std::uint64_t index = 0);

// mt19937_64 with portable helpers (the standard distributions are not
// bit-reproducible across library implementations).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, RngStream stream, std::uint64_t index = 0)
      : engine_(derive_seed(seed, stream, index)) {}

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform on (0, 1].
  double uniform_open_zero() { return 1.0 - uniform(); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  bool bernoulli(double p) { return uniform() < p; }
  // Number of failures before the next success of a Bernoulli(p) sequence.
  std::uint64_t geometric(double p);

  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace streambp
