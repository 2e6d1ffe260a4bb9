#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace patchchar {

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter), so results do not depend on iteration order or
// on how work is split across threads.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t Bits(std::uint64_t stream, std::uint64_t counter) const {
    std::uint64_t x = Mix(seed_ ^ Mix(stream + 0x9e3779b97f4a7c15ULL));
    return Mix(x ^ Mix(counter * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL));
  }

  // Uniform in the open interval (0, 1).
  double Uniform(std::uint64_t stream, std::uint64_t counter) const {
    return (static_cast<double>(Bits(stream, counter) >> 11) + 0.5) *
           0x1.0p-53;
  }

  // Standard normal via Box-Muller on two sub-streams.
  double Normal(std::uint64_t stream, std::uint64_t counter) const {
    const double u1 = Uniform(2 * stream, counter);
    const double u2 = Uniform(2 * stream + 1, counter);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  static std::uint64_t Mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t seed_;
};

inline std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t a,
                                std::uint64_t b = 0, std::uint64_t c = 0) {
  return CounterRng::Mix(seed ^ CounterRng::Mix(a ^ CounterRng::Mix(
                                    b ^ CounterRng::Mix(c))));
}

}  // namespace patchchar
