#ifndef PERCIMPACT_RANDOM_HPP_
#define PERCIMPACT_RANDOM_HPP_

// Deterministic random streams.
//
// The whole sampling pipeline is pinned so that a 64-bit seed fully
// determines every simulation output, bit for bit:
//   - state initialization: splitmix64 expansion of the seed
//   - uniform generator:    xoshiro256++
//   - normal variates:      Box-Muller, consuming two uniforms per pair
//     (u1 in (0,1] for the radius, u2 in [0,1) for the angle; the sine
//     variate is cached and returned on the next call)
// Derived streams (per series, per replicate) mix the master seed
// through splitmix64 before offsetting by k, so streams from nearby
// master seeds never coincide.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace percimpact {

inline constexpr const char* kRngAlgorithm =
    "xoshiro256++ / splitmix64 seeding / box-muller normals";

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed for the k-th derived stream of a master seed. The master is
// scrambled first: seed+1 at k=0 must not collide with seed at k=1.
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t k) {
  std::uint64_t state = master_seed;
  state = splitmix64_next(state) + k;
  return splitmix64_next(state);
}

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64_next(sm);
  }

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1), 53 significant bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1]; safe as a log argument.
  double next_unit_open() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_unit_open();
    const double u2 = next_unit();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  // Independent stream for parallel or per-series use. Derivation
  // depends only on (seed, k), never on this stream's position.
  RandomStream substream(std::uint64_t k) const {
    return RandomStream(derive_seed(seed_, k));
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t seed_;
  std::uint64_t state_[4];
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace percimpact

#endif  // PERCIMPACT_RANDOM_HPP_
