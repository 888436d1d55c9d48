#pragma once

#include <cstdint>

namespace skewtv {

namespace detail {

// SplitMix64 finalizer (Steele, Lea & Flood 2014).
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Counter-based 64-bit generator: output i is the SplitMix64 finalizer
/// applied to seed + (i+1) * golden gamma. Apart from the counter there is
/// no hidden state, so a (seed, counter) pair pins the whole stream and
/// distinct seeds give independent streams.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64() {
    return detail::mix64(seed_ + (++counter_) * 0x9E3779B97F4A7C15ULL);
  }

  /// Uniform on the open interval (0,1); 53-bit resolution, never 0 or 1.
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

/// Seed for stream k of a multi-stream run: base_seed XOR hash(k), where
/// hash is the SplitMix64 finalizer of k offset by the golden gamma (the
/// offset keeps stream 0 well mixed).
inline std::uint64_t stream_seed(std::uint64_t base_seed, std::uint64_t stream) {
  return base_seed ^ detail::mix64(stream + 0x9E3779B97F4A7C15ULL);
}

}  // namespace skewtv
