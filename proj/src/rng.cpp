#include "fsw/rng.hpp"

#include <cmath>

namespace fsw {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Stream::Stream(std::uint64_t seed, std::uint64_t stream_id)
    : state_(mix64(seed + kGolden) ^ mix64(stream_id * kGolden + 0x632be59bd9b4e019ULL)) {}

Stream Stream::substream(std::uint64_t seed, std::uint64_t stream_id,
                         std::uint64_t block) {
  return Stream(seed, mix64(stream_id + kGolden) ^ mix64(~block));
}

Stream::result_type Stream::operator()() noexcept {
  state_ += kGolden;
  return mix64(state_);
}

double Stream::uniform_open() noexcept {
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double Stream::exponential() noexcept { return -std::log(uniform_open()); }

}  // namespace fsw
