#pragma once

#include <cstdint>

namespace wavemotion {

/// Splittable counter-based generator (SplitMix64 core).
///
/// Every draw is a pure function of the 64-bit state, so streams are
/// bit-reproducible across platforms and compilers. `split` derives an
/// independent substream from a stream id, which lets dataset builders hand
/// out per-sequence generators from one global seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), 53 significant bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  /// Independent substream keyed by `stream_id`; advancing the child never
  /// touches the parent state.
  Rng split(std::uint64_t stream_id) const {
    Rng mix(state_ ^ 0x5851f42d4c957f2dULL);
    mix.state_ += stream_id * 0x14057b7ef767814fULL;
    return Rng(mix.next_u64());
  }

 private:
  std::uint64_t state_;
};

}  // namespace wavemotion
