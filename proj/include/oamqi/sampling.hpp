// sampling.hpp
// Seeded shot sampling. One stream per task; sub-seeds come from (seed, index) so
// results do not depend on how tasks are scheduled.

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace oamqi {

inline constexpr const char* kPrngName = "mt19937_64/splitmix64";

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

struct SamplingSpec {
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) from the top 53 bits; identical on every platform.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::size_t below(std::size_t n) {
    if (n == 0) throw std::invalid_argument("below(0)");
    return static_cast<std::size_t>(uniform() * static_cast<double>(n));
  }

 private:
  std::mt19937_64 engine_;
};

// Inverse-CDF draw of one outcome.
inline std::size_t sample_categorical(std::span<const double> probs, double u) {
  double total = 0.0;
  for (double p : probs) {
    if (p < 0.0) throw std::invalid_argument("negative probability");
    total += p;
  }
  if (!(total > 0.0)) throw std::invalid_argument("probabilities sum to zero");
  double acc = 0.0;
  const double target = u * total;
  std::size_t last = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] == 0.0) continue;
    last = i;
    acc += probs[i];
    if (target < acc) return i;
  }
  return last;
}

inline std::vector<std::uint64_t> sample_multinomial(std::span<const double> probs, std::uint64_t shots, Rng& rng) {
  std::vector<std::uint64_t> counts(probs.size(), 0);
  for (std::uint64_t n = 0; n < shots; ++n) ++counts[sample_categorical(probs, rng.uniform())];
  return counts;
}

}  // namespace oamqi
