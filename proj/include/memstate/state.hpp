#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace memstate {

/// Binary hypervector on a grid of `dimension` sites, packed 64 sites per word.
///
/// Site i lives in bit (i % 64) of word (i / 64). Padding bits past the
/// dimension are always zero, so whole-word popcounts and comparisons are
/// exact. States are immutable once built.
class State {
 public:
  static constexpr std::size_t kWordBits = 64;

  /// Takes ownership of `words`; padding bits are cleared. Throws
  /// std::invalid_argument for dimension 0 or a word count that does not
  /// match the dimension.
  State(std::uint32_t dimension, std::vector<std::uint64_t> words);

  static State zeros(std::uint32_t dimension);
  static State ones(std::uint32_t dimension);
  /// Parses a string of '0'/'1' characters; character i is site i.
  static State from_string(std::string_view bits);
  static State from_bits(std::span<const std::uint8_t> bits);

  std::uint32_t dimension() const noexcept { return dimension_; }
  std::span<const std::uint64_t> words() const noexcept { return words_; }
  bool test(std::size_t site) const;
  std::uint64_t popcount() const noexcept;
  std::string to_string() const;

  /// Mask of the valid bits in the final word.
  std::uint64_t tail_mask() const noexcept { return tail_mask_for(dimension_); }

  static std::size_t word_count(std::uint32_t dimension) noexcept {
    return (static_cast<std::size_t>(dimension) + kWordBits - 1) / kWordBits;
  }
  static std::uint64_t tail_mask_for(std::uint32_t dimension) noexcept;

  friend bool operator==(const State& a, const State& b) noexcept {
    return a.dimension_ == b.dimension_ && a.words_ == b.words_;
  }

 private:
  std::uint32_t dimension_;
  std::vector<std::uint64_t> words_;
};

/// Throws DimensionMismatch unless both states share a dimension.
void require_same_dimension(const State& a, const State& b);

// Binary layout: little-endian uint32 dimension, then word_count(dimension)
// little-endian uint64 words. Non-zero padding bits are rejected on read.
void write_state(std::ostream& out, const State& state);
State read_state(std::istream& in);
void save_state(const std::filesystem::path& path, const State& state);
State load_state(const std::filesystem::path& path);

}  // namespace memstate
