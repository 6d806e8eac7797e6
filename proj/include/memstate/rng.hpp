#pragma once

#include <cstdint>

namespace memstate {

/// SplitMix64 output finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

/// Sequential 64-bit draws owned by one packed word of one noise block.
class WordDraws {
 public:
  explicit constexpr WordDraws(std::uint64_t state) noexcept : state_(state) {}
  constexpr std::uint64_t next() noexcept {
    state_ += kGoldenGamma;
    return mix64(state_);
  }

 private:
  std::uint64_t state_;
};

/// The randomness consumed by a single stochastic operation.
///
/// Draws are addressed by word index, so a kernel may visit words in any order
/// (or from any number of threads) and still see exactly the same bits.
class NoiseBlock {
 public:
  explicit constexpr NoiseBlock(std::uint64_t key) noexcept : key_(key) {}
  constexpr WordDraws word(std::uint64_t index) const noexcept {
    return WordDraws(mix64(key_ ^ mix64(index + 0x632be59bd9b4e019ULL)));
  }
  constexpr std::uint64_t key() const noexcept { return key_; }

 private:
  std::uint64_t key_;
};

/// Explicit deterministic random stream identified by (seed, stream index).
///
/// Every stochastic operation takes one NoiseBlock from the stream, so two
/// calls on the same stream see fresh noise while a replay from the same
/// (seed, stream index) reproduces every bit. Streams for concurrent work are
/// derived with child(); they never share state.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_index = 0) noexcept;

  /// Independent stream keyed by this stream's identity and `index`; does not
  /// depend on (or advance) the current position.
  RngStream child(std::uint64_t index) const noexcept;

  NoiseBlock next_block() noexcept;
  std::uint64_t next_u64() noexcept;
  /// Uniform double in [0, 1) with 53 random bits.
  double next_unit() noexcept;

  std::uint64_t position() const noexcept { return counter_; }

  friend bool operator==(const RngStream&, const RngStream&) = default;

 private:
  struct FromKey {};
  RngStream(FromKey, std::uint64_t key) noexcept : key_(key) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Probability quantised to 32 fractional bits; 2^32 means certainty.
class Probability32 {
 public:
  static constexpr std::uint64_t kOne = std::uint64_t{1} << 32;

  /// Rounds `p` (clamped to [0,1]) to the nearest multiple of 2^-32.
  static Probability32 from_double(double p) noexcept;
  constexpr std::uint64_t raw() const noexcept { return raw_; }
  constexpr double value() const noexcept {
    return static_cast<double>(raw_) / static_cast<double>(kOne);
  }

 private:
  explicit constexpr Probability32(std::uint64_t raw) noexcept : raw_(raw) {}
  std::uint64_t raw_;
};

/// 64 independent Bernoulli(p) bits.
///
/// Walks the binary expansion of p from its lowest set bit upwards, combining
/// fresh uniform words with OR (bit set) or AND (bit clear). Each step maps the
/// per-bit probability P to (1+P)/2 or P/2, which ends at exactly p.raw()/2^32.
inline std::uint64_t bernoulli_word(WordDraws& draws, Probability32 p) noexcept {
  const std::uint64_t raw = p.raw();
  if (raw == 0) return 0;
  if (raw >= Probability32::kOne) return ~std::uint64_t{0};
  int bit = 0;
  while (((raw >> bit) & 1U) == 0) ++bit;
  std::uint64_t mask = draws.next();
  for (++bit; bit < 32; ++bit) {
    const std::uint64_t r = draws.next();
    mask = ((raw >> bit) & 1U) ? (mask | r) : (mask & r);
  }
  return mask;
}

}  // namespace memstate
