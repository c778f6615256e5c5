#ifndef CACER_RANDOM_H_
#define CACER_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace cacer {

std::uint64_t SplitMix64(std::uint64_t x);

// Seed of substream `index` under `seed`; substreams are independent of the
// order in which they are consumed.
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t index);

// 64-bit FNV-1a.
std::uint64_t Fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);

// mt19937_64 with portable draws: results are identical across standard
// library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }
  // Uniform in [0, n); n > 0.
  std::uint64_t Below(std::uint64_t n);
  // Uniform in [lo, hi].
  std::uint64_t Between(std::uint64_t lo, std::uint64_t hi) { return lo + Below(hi - lo + 1); }
  // Uniform in [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }
  bool Bernoulli(double p) { return Uniform() < p; }
  // Index drawn proportionally to non-negative weights (not all zero).
  std::size_t Categorical(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
};

}  // namespace cacer

#endif  // CACER_RANDOM_H_
