#pragma once

#include <cstdint>
#include <vector>

#include "gbc/common.hpp"

namespace gbc {

/// splitmix64, used only to expand seeds into full generator state.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic per-stream generator (xoshiro256++). A stream is keyed by
/// (seed, stream_id); ensemble members each own one stream, so results do not
/// depend on scheduling or worker count.
class RngStream {
public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) {
    std::uint64_t sm = seed ^ (0x6a09e667f3bcc909ULL + stream_id * 0x1d8e4e27c47d124fULL);
    for (auto& w : s_) w = splitmix64(sm);
  }

  std::uint64_t next_u64() {
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

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Draws an index from the categorical distribution whose inclusive
  /// cumulative weights are `cdf` (last entry = total weight).
  std::size_t categorical(const std::vector<double>& cdf) {
    if (cdf.empty()) throw Error("categorical: empty distribution");
    const double u = uniform01() * cdf.back();
    std::size_t lo = 0, hi = cdf.size() - 1;
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (cdf[mid] <= u)
        lo = mid + 1;
      else
        hi = mid;
    }
    return lo;
  }

private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

/// Fixed stream-id bases so different random purposes never collide.
namespace stream {
inline constexpr std::uint64_t member_base = 0;          // + member index
inline constexpr std::uint64_t state_phases = 1ULL << 56;
inline constexpr std::uint64_t scenario = (1ULL << 56) + 1;
}  // namespace stream

}  // namespace gbc
