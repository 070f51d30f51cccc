#pragma once

#include <bit>
#include <cstdint>

namespace gmnb {

// splitmix64 step: advances `state` and returns a well-mixed 64-bit value.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Folds up to four indices into one stream id. Used to key statistically
// independent substreams by (tag, iteration, gene, ...) so that draw
// sequences do not depend on scheduling.
inline std::uint64_t stream_key(std::uint64_t a, std::uint64_t b = 0,
                                std::uint64_t c = 0, std::uint64_t d = 0) {
  std::uint64_t x = 0x243f6a8885a308d3ULL ^ a;
  std::uint64_t h = splitmix64(x);
  x = h ^ b;
  h = splitmix64(x);
  x = h ^ c;
  h = splitmix64(x);
  x = h ^ d;
  h = splitmix64(x);
  return h;
}

// Seedable, splittable random stream: xoshiro256++ with state derived from
// (seed, stream_id) via splitmix64. Identical (seed, stream_id, call
// sequence) gives identical draws; distinct stream_ids give streams that
// are independent for practical purposes.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) {
    std::uint64_t x = seed;
    std::uint64_t h = splitmix64(x);
    x = h ^ stream_id;
    for (auto& w : s_) w = splitmix64(x);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;  // all-zero is invalid
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = std::rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return result;
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1): bin midpoints, never exactly 0 or 1. Safe under log().
  double uniform_pos() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t s_[4];
};

}  // namespace gmnb
