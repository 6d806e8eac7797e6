#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "memstate/state.hpp"

namespace memstate {

/// Row-major binary image; pixel (row, col) is site row * width + col.
struct BitImage {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<std::uint8_t> bits;

  State to_state() const;
  static BitImage from_state(const State& state, std::uint32_t width, std::uint32_t height);
};

/// Reads the first `count` images of an IDX3 unsigned-byte file (magic
/// 0x00000803) and binarises each pixel as value >= threshold.
///
/// Throws FormatError (with the byte offset) for a bad magic number, missing
/// dimensions or a truncated payload, std::invalid_argument when `count`
/// exceeds the images in the file, and IoError when the file cannot be opened.
std::vector<BitImage> ingest_idx_images(const std::filesystem::path& path, unsigned threshold,
                                        std::size_t count);

/// Writes 8-bit grayscale images as an IDX3 file.
void write_idx_images(const std::filesystem::path& path, std::uint32_t rows, std::uint32_t cols,
                      const std::vector<std::vector<std::uint8_t>>& images);

/// Plain PBM (P1), 1 = black.
void write_pbm(const std::filesystem::path& path, const BitImage& image);

}  // namespace memstate
