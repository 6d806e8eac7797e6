#include "memstate/bit_image.hpp"

#include <array>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "memstate/errors.hpp"

namespace memstate {

namespace {

constexpr std::uint32_t kIdxUnsignedByte3 = 0x00000803;

std::uint32_t read_be32(std::istream& in, std::size_t offset, const char* what) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), b.size()))
    throw FormatError("IDX file truncated at offset " + std::to_string(offset) + " (reading " +
                      what + ")");
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) |
         std::uint32_t{b[3]};
}

void write_be32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> b{static_cast<char>(v >> 24), static_cast<char>((v >> 16) & 0xff),
                              static_cast<char>((v >> 8) & 0xff), static_cast<char>(v & 0xff)};
  out.write(b.data(), b.size());
}

}  // namespace

State BitImage::to_state() const {
  if (width == 0 || height == 0 || bits.size() != std::size_t{width} * height)
    throw std::invalid_argument("bit image size does not match width * height");
  return State::from_bits(bits);
}

BitImage BitImage::from_state(const State& state, std::uint32_t width, std::uint32_t height) {
  if (std::uint64_t{width} * height != state.dimension())
    throw std::invalid_argument("image " + std::to_string(width) + "x" + std::to_string(height) +
                                " does not match state dimension " +
                                std::to_string(state.dimension()));
  BitImage image{width, height, std::vector<std::uint8_t>(state.dimension())};
  for (std::size_t i = 0; i < image.bits.size(); ++i) image.bits[i] = state.test(i) ? 1 : 0;
  return image;
}

std::vector<BitImage> ingest_idx_images(const std::filesystem::path& path, unsigned threshold,
                                        std::size_t count) {
  if (threshold > 255) throw std::invalid_argument("binarisation threshold must be in 0..255");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open IDX file '" + path.string() + "'");
  const std::string where = path.string() + ": ";

  try {
    const std::uint32_t magic = read_be32(in, 0, "magic");
    if (magic != kIdxUnsignedByte3) {
      std::ostringstream msg;
      msg << "bad IDX magic 0x" << std::hex << magic << " at offset 0 (expected 0x00000803)";
      throw FormatError(msg.str());
    }
    const std::uint32_t available = read_be32(in, 4, "image count");
    const std::uint32_t rows = read_be32(in, 8, "row count");
    const std::uint32_t cols = read_be32(in, 12, "column count");
    if (rows == 0 || cols == 0) throw FormatError("IDX dimensions are zero at offset 8");
    if (count > available)
      throw std::invalid_argument(where + "requested " + std::to_string(count) +
                                  " images but the file holds " + std::to_string(available));

    const std::size_t pixels = std::size_t{rows} * cols;
    std::vector<BitImage> images;
    images.reserve(count);
    std::vector<unsigned char> raw(pixels);
    for (std::size_t i = 0; i < count; ++i) {
      if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(pixels)))
        throw FormatError("IDX file truncated at offset " + std::to_string(16 + i * pixels) +
                          " (image " + std::to_string(i) + ")");
      BitImage image{cols, rows, std::vector<std::uint8_t>(pixels)};
      for (std::size_t p = 0; p < pixels; ++p) image.bits[p] = raw[p] >= threshold ? 1 : 0;
      images.push_back(std::move(image));
    }
    return images;
  } catch (const FormatError& e) {
    throw FormatError(where + e.what());
  }
}

void write_idx_images(const std::filesystem::path& path, std::uint32_t rows, std::uint32_t cols,
                      const std::vector<std::vector<std::uint8_t>>& images) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_be32(out, kIdxUnsignedByte3);
  write_be32(out, static_cast<std::uint32_t>(images.size()));
  write_be32(out, rows);
  write_be32(out, cols);
  for (const auto& image : images) {
    if (image.size() != std::size_t{rows} * cols)
      throw std::invalid_argument("image size does not match rows * cols");
    out.write(reinterpret_cast<const char*>(image.data()), static_cast<std::streamsize>(image.size()));
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void write_pbm(const std::filesystem::path& path, const BitImage& image) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "P1\n" << image.width << ' ' << image.height << '\n';
  for (std::uint32_t r = 0; r < image.height; ++r) {
    for (std::uint32_t c = 0; c < image.width; ++c) {
      if (c) out << ' ';
      out << int{image.bits[std::size_t{r} * image.width + c]};
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace memstate
