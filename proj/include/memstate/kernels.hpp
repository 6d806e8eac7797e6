#pragma once

// Word-level kernels behind the state algebra.
//
// `serial` is the plain reference loop; `parallel` is the OpenMP version used
// by the public operations. Noise is addressed per word through NoiseBlock, so
// both produce identical bits for any thread count. Outputs must be sized like
// the inputs; the final word of every output is masked with `tail`.

#include <cstddef>
#include <cstdint>
#include <span>

#include "memstate/rng.hpp"

namespace memstate::kernels {

using Words = std::span<const std::uint64_t>;
using OutWords = std::span<std::uint64_t>;

/// Word counts below this run serially even in the parallel kernels.
inline constexpr std::size_t kParallelMinWords = 1U << 12;

namespace serial {
std::uint64_t popcount(Words a);
std::uint64_t popcount_xor(Words a, Words b);
std::uint64_t popcount_and(Words a, Words b);
void xnor(Words a, Words b, OutWords out, std::uint64_t tail);
void bernoulli(OutWords out, NoiseBlock noise, Probability32 p, std::uint64_t tail);
void bundle(Words a, Words b, OutWords out, NoiseBlock noise, Probability32 theta);
void flip(Words a, OutWords out, NoiseBlock noise, Probability32 epsilon, std::uint64_t tail);
}  // namespace serial

namespace parallel {
std::uint64_t popcount(Words a);
std::uint64_t popcount_xor(Words a, Words b);
std::uint64_t popcount_and(Words a, Words b);
void xnor(Words a, Words b, OutWords out, std::uint64_t tail);
void bernoulli(OutWords out, NoiseBlock noise, Probability32 p, std::uint64_t tail);
void bundle(Words a, Words b, OutWords out, NoiseBlock noise, Probability32 theta);
void flip(Words a, OutWords out, NoiseBlock noise, Probability32 epsilon, std::uint64_t tail);

/// Thread budget for the parallel kernels; 0 restores the OpenMP default.
void set_max_threads(int threads);
/// Lower the size cutoff (tests and benchmarks force threading on small inputs).
void set_min_words(std::size_t words);
std::size_t min_words();
}  // namespace parallel

}  // namespace memstate::kernels
