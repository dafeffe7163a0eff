#pragma once

#include <cmath>
#include <cstdint>

namespace nvm {

// Counter-based generator: splitmix64 over a stream-keyed counter.
// Stream (master_seed, stream_id) is reproducible independently of every
// other stream, so replicas can run in any order (or concurrently) and
// still produce byte-identical results.
class Rng {
 public:
  Rng(std::uint64_t master_seed, std::uint64_t stream_id = 0)
      : state_(mix(mix(master_seed ^ 0x9e3779b97f4a7c15ull) ^ stream_id)) {}

  std::uint64_t u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    return mix(z);
  }

  // uniform on [0,1) with 53 random bits
  double uniform01() { return (u64() >> 11) * 0x1.0p-53; }

  // uniform integer in [0, bound), bound >= 1 (Lemire rejection)
  std::uint64_t below(std::uint64_t bound) {
    std::uint64_t x = u64();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
      std::uint64_t t = (-bound) % bound;
      while (lo < t) {
        x = u64();
        m = static_cast<__uint128_t>(x) * bound;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  bool coin() { return u64() >> 63; }

  bool bernoulli(double pr) { return uniform01() < pr; }

  double exponential(double rate) {
    return -std::log1p(-uniform01()) / rate;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace nvm
