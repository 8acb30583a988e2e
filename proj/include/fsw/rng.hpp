#pragma once

#include <cstdint>
#include <limits>

namespace fsw {

// Counter-based SplitMix64 stream. A (seed, stream id) pair fully determines
// the sequence, so Monte Carlo work can be split across threads by stream id
// and still reproduce bit-for-bit.
class Stream {
 public:
  using result_type = std::uint64_t;

  Stream(std::uint64_t seed, std::uint64_t stream_id);

  /// Derived stream for sub-block `block` of stream `stream_id`.
  static Stream substream(std::uint64_t seed, std::uint64_t stream_id,
                          std::uint64_t block);

  result_type operator()() noexcept;

  /// Uniform double in the open interval (0, 1), 53-bit resolution.
  double uniform_open() noexcept;

  /// Standard exponential variate.
  double exponential() noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

 private:
  std::uint64_t state_;
};

std::uint64_t mix64(std::uint64_t z) noexcept;

}  // namespace fsw
