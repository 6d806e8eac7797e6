#include "memstate/rng.hpp"

#include <algorithm>
#include <cmath>

namespace memstate {

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_index) noexcept
    : key_(mix64(mix64(seed ^ 0x5851f42d4c957f2dULL) + stream_index * kGoldenGamma)) {}

RngStream RngStream::child(std::uint64_t index) const noexcept {
  return RngStream(FromKey{}, mix64(key_ ^ mix64(index ^ 0xd1b54a32d192ed03ULL)));
}

NoiseBlock RngStream::next_block() noexcept {
  ++counter_;
  return NoiseBlock(mix64(key_ + counter_ * kGoldenGamma));
}

std::uint64_t RngStream::next_u64() noexcept {
  return next_block().word(0).next();
}

double RngStream::next_unit() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

Probability32 Probability32::from_double(double p) noexcept {
  if (!(p > 0.0)) return Probability32(0);
  if (p >= 1.0) return Probability32(kOne);
  return Probability32(static_cast<std::uint64_t>(std::llround(std::ldexp(p, 32))));
}

}  // namespace memstate
