#ifndef CGR_SPLITMIX64_HPP
#define CGR_SPLITMIX64_HPP

#include <cstdint>

namespace cgr {

/// SplitMix64 generator. Tiny state, full 2^64 period, and cheap enough
/// that every run can own an independent instance keyed by its seed.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, m). Multiply-shift map: floor(m * z / 2^64).
  std::uint64_t next_below(std::uint64_t m) {
    unsigned __int128 wide = static_cast<unsigned __int128>(next()) * m;
    return static_cast<std::uint64_t>(wide >> 64);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  std::uint64_t state() const { return state_; }

private:
  std::uint64_t state_;
};

}  // namespace cgr

#endif  // CGR_SPLITMIX64_HPP
