#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace memstate {

/// Two states that must live on the same grid do not.
class DimensionMismatch : public std::invalid_argument {
 public:
  DimensionMismatch(std::uint32_t lhs, std::uint32_t rhs);
  std::uint32_t lhs() const noexcept { return lhs_; }
  std::uint32_t rhs() const noexcept { return rhs_; }

 private:
  std::uint32_t lhs_;
  std::uint32_t rhs_;
};

/// Malformed file contents (state files, IDX images, result files).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem failure; the message carries the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid experiment configuration or CLI flag value.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace memstate
