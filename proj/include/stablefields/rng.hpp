#pragma once

#include <array>
#include <cmath>
#include <cstdint>

// Reproducible random streams.  Stream (master_seed, stream_index) is seeded
// through splitmix64 and driven by xoshiro256++, with uniform/normal/
// exponential transforms implemented here so that draw sequences are
// bit-identical across platforms and thread schedules.

namespace stablefields {

struct RngStream {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;

  RngStream() { reseed(); }
  RngStream(std::uint64_t seed, std::uint64_t stream)
      : master_seed(seed), stream_index(stream) {
    reseed();
  }

  void reseed() {
    std::uint64_t z = master_seed + 0x9E3779B97F4A7C15ULL * (stream_index + 1);
    for (auto& w : s_) {
      z += 0x9E3779B97F4A7C15ULL;
      std::uint64_t x = z;
      x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
      x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
      w = x ^ (x >> 31);
    }
    has_spare_ = false;
  }

  std::uint64_t next_u64() {
    auto rotl = [](std::uint64_t x, int k) {
      return (x << k) | (x >> (64 - k));
    };
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform on (0,1); never returns 0 so logs are safe
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential() { return -std::log(uniform()); }

  double normal() {  // Box-Muller with cached spare
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.28318530717958647692 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::array<std::uint64_t, 4> s_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace stablefields
