#include "memstate/state.hpp"

#include <array>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "memstate/errors.hpp"

namespace memstate {

namespace {

void check_dimension(std::uint32_t dimension) {
  if (dimension == 0) throw std::invalid_argument("state dimension must be positive");
}

template <std::size_t Bytes>
std::array<char, Bytes> to_le(std::uint64_t value) {
  std::array<char, Bytes> out{};
  for (std::size_t i = 0; i < Bytes; ++i) out[i] = static_cast<char>((value >> (8 * i)) & 0xffU);
  return out;
}

template <std::size_t Bytes>
std::uint64_t from_le(const std::array<char, Bytes>& in) {
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < Bytes; ++i)
    value |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[i])) << (8 * i);
  return value;
}

}  // namespace

DimensionMismatch::DimensionMismatch(std::uint32_t lhs, std::uint32_t rhs)
    : std::invalid_argument("dimension mismatch: " + std::to_string(lhs) + " vs " +
                            std::to_string(rhs)),
      lhs_(lhs),
      rhs_(rhs) {}

std::uint64_t State::tail_mask_for(std::uint32_t dimension) noexcept {
  const std::size_t used = dimension % kWordBits;
  return used == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << used) - 1;
}

State::State(std::uint32_t dimension, std::vector<std::uint64_t> words)
    : dimension_(dimension), words_(std::move(words)) {
  check_dimension(dimension);
  if (words_.size() != word_count(dimension))
    throw std::invalid_argument("word count " + std::to_string(words_.size()) +
                                " does not match dimension " + std::to_string(dimension));
  words_.back() &= tail_mask();
}

State State::zeros(std::uint32_t dimension) {
  check_dimension(dimension);
  return State(dimension, std::vector<std::uint64_t>(word_count(dimension), 0));
}

State State::ones(std::uint32_t dimension) {
  check_dimension(dimension);
  return State(dimension, std::vector<std::uint64_t>(word_count(dimension), ~std::uint64_t{0}));
}

State State::from_string(std::string_view bits) {
  if (bits.empty() || bits.size() > UINT32_MAX)
    throw std::invalid_argument("bit string length must be in [1, 2^32)");
  const auto dimension = static_cast<std::uint32_t>(bits.size());
  std::vector<std::uint64_t> words(word_count(dimension), 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1')
      words[i / kWordBits] |= std::uint64_t{1} << (i % kWordBits);
    else if (bits[i] != '0')
      throw std::invalid_argument("bit string may only contain '0' and '1'");
  }
  return State(dimension, std::move(words));
}

State State::from_bits(std::span<const std::uint8_t> bits) {
  if (bits.empty() || bits.size() > UINT32_MAX)
    throw std::invalid_argument("bit count must be in [1, 2^32)");
  const auto dimension = static_cast<std::uint32_t>(bits.size());
  std::vector<std::uint64_t> words(word_count(dimension), 0);
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i] != 0) words[i / kWordBits] |= std::uint64_t{1} << (i % kWordBits);
  return State(dimension, std::move(words));
}

bool State::test(std::size_t site) const {
  if (site >= dimension_) throw std::out_of_range("site index out of range");
  return (words_[site / kWordBits] >> (site % kWordBits)) & 1U;
}

std::uint64_t State::popcount() const noexcept {
  std::uint64_t total = 0;
  for (auto w : words_) total += static_cast<std::uint64_t>(std::popcount(w));
  return total;
}

std::string State::to_string() const {
  std::string out(dimension_, '0');
  for (std::size_t i = 0; i < dimension_; ++i)
    if ((words_[i / kWordBits] >> (i % kWordBits)) & 1U) out[i] = '1';
  return out;
}

void require_same_dimension(const State& a, const State& b) {
  if (a.dimension() != b.dimension()) throw DimensionMismatch(a.dimension(), b.dimension());
}

void write_state(std::ostream& out, const State& state) {
  const auto header = to_le<4>(state.dimension());
  out.write(header.data(), header.size());
  for (auto w : state.words()) {
    const auto bytes = to_le<8>(w);
    out.write(bytes.data(), bytes.size());
  }
}

State read_state(std::istream& in) {
  std::array<char, 4> header{};
  if (!in.read(header.data(), header.size()))
    throw FormatError("state file truncated at offset 0 (missing dimension header)");
  const auto dimension = static_cast<std::uint32_t>(from_le<4>(header));
  if (dimension == 0) throw FormatError("state file declares dimension 0 at offset 0");
  std::vector<std::uint64_t> words(State::word_count(dimension));
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::array<char, 8> bytes{};
    if (!in.read(bytes.data(), bytes.size()))
      throw FormatError("state file truncated at offset " + std::to_string(4 + 8 * i));
    words[i] = from_le<8>(bytes);
  }
  if ((words.back() & ~State::tail_mask_for(dimension)) != 0)
    throw FormatError("state file has non-zero padding bits in its final word at offset " +
                      std::to_string(4 + 8 * (words.size() - 1)));
  return State(dimension, std::move(words));
}

void save_state(const std::filesystem::path& path, const State& state) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_state(out, state);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

State load_state(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  try {
    return read_state(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace memstate
