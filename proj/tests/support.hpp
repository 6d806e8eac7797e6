#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "memstate/algebra.hpp"
#include "memstate/rng.hpp"
#include "memstate/state.hpp"

namespace testing_support {

inline constexpr std::uint32_t kN = 10000;

inline std::vector<memstate::State> draw_states(std::size_t count, std::uint32_t dim, double q,
                                                memstate::RngStream& rng) {
  std::vector<memstate::State> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(memstate::random_qstate(dim, q, rng));
  return out;
}

// Binary entropy in nats, computed independently of the library.
inline double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log(p) - (1.0 - p) * std::log(1.0 - p);
}

}  // namespace testing_support
