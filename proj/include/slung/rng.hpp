#pragma once

#include <cstdint>
#include <random>

namespace slung {

// splitmix64 step, used to derive independent substream seeds from a base
// seed. Substream k of seed s is splitmix64 applied k+1 times to s ^ salt.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t s = base ^ (0x7f4a7c15ull + stream * 0x9e3779b97f4a7c15ull);
  std::uint64_t out = 0;
  for (int i = 0; i < 2; ++i) out = splitmix64(s);
  return out;
}

// mt19937_64 with explicit mapping to doubles so sequences do not depend on
// the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace slung
