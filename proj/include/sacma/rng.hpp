#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace sacma {

// Counter-based deterministic random generator with named substreams.
//
// Draw k of a stream is mix64(key + k * golden); the state is just
// (key, counter), so a stream is a pure function of its seed, its
// derivation path and the number of draws taken.  Substreams are derived
// by hashing a salt (or a name) into a fresh key, which makes streams
// independent of each other and of the parent: interleaving draws from
// one stream never changes what another stream produces.
class Rng {
 public:
  Rng() : Rng(0) {}
  explicit Rng(std::uint64_t seed) : key_(mix64(seed ^ kSeedTag)), ctr_(0) {}

  // Independent substream identified by an integer salt.
  Rng stream(std::uint64_t salt) const {
    Rng r;
    r.key_ = mix64(key_ ^ mix64(salt ^ kStreamTag));
    r.ctr_ = 0;
    return r;
  }

  // Independent substream identified by name.
  Rng stream(std::string_view name) const { return stream(fnv1a64(name)); }

  std::uint64_t next_u64() { return mix64(key_ + ++ctr_ * kGolden); }

  // Uniform in [0, 1); 53 usable mantissa bits.
  double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via Box-Muller; always consumes exactly two draws.
  double normal() {
    double u1 = uniform01();
    double u2 = uniform01();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  std::uint64_t key() const { return key_; }

  static std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    return h;
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
  static constexpr std::uint64_t kSeedTag = 0xA5A5A5A55A5A5A5Aull;
  static constexpr std::uint64_t kStreamTag = 0xC2B2AE3D27D4EB4Full;

  // 64-bit finalizer (murmur3 style): full avalanche on the counter word.
  static std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 33;
    z *= 0xFF51AFD7ED558CCDull;
    z ^= z >> 33;
    z *= 0xC4CEB9FE1A85EC53ull;
    z ^= z >> 33;
    return z;
  }

  std::uint64_t key_;
  std::uint64_t ctr_;
};

}  // namespace sacma
