// Serial reference kernels versus their OpenMP counterparts.
//
//   ./build/bench/memstate_bench --benchmark_filter=bundle

#include <benchmark/benchmark.h>

#include <vector>

#include "memstate/kernels.hpp"
#include "memstate/rng.hpp"

namespace {

using namespace memstate;

std::vector<std::uint64_t> random_words(std::size_t n, std::uint64_t seed) {
  std::vector<std::uint64_t> w(n);
  RngStream rng(seed);
  kernels::serial::bernoulli(w, rng.next_block(), Probability32::from_double(0.5), ~0ULL);
  return w;
}

template <bool Parallel>
void BM_Bundle(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_words(n, 1), b = random_words(n, 2);
  std::vector<std::uint64_t> out(n);
  RngStream rng(3);
  const auto theta = Probability32::from_double(0.5);
  kernels::parallel::set_min_words(1);
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::parallel::bundle(a, b, out, rng.next_block(), theta);
    else
      kernels::serial::bundle(a, b, out, rng.next_block(), theta);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * n * 8));
}

template <bool Parallel>
void BM_RandomQState(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<std::uint64_t> out(n);
  RngStream rng(4);
  const auto q = Probability32::from_double(1.0 / 3.0);
  kernels::parallel::set_min_words(1);
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::parallel::bernoulli(out, rng.next_block(), q, ~0ULL);
    else
      kernels::serial::bernoulli(out, rng.next_block(), q, ~0ULL);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * n * 8));
}

template <bool Parallel>
void BM_PopcountXor(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_words(n, 5), b = random_words(n, 6);
  kernels::parallel::set_min_words(1);
  for (auto _ : state) {
    std::uint64_t c = Parallel ? kernels::parallel::popcount_xor(a, b)
                               : kernels::serial::popcount_xor(a, b);
    benchmark::DoNotOptimize(c);
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * n * 16));
}

// 157 words is the 100x100 grid; the larger sizes show where threads pay off.
#define MEMSTATE_SIZES ->Arg(157)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20)

BENCHMARK(BM_Bundle<false>) MEMSTATE_SIZES;
BENCHMARK(BM_Bundle<true>) MEMSTATE_SIZES;
BENCHMARK(BM_RandomQState<false>) MEMSTATE_SIZES;
BENCHMARK(BM_RandomQState<true>) MEMSTATE_SIZES;
BENCHMARK(BM_PopcountXor<false>) MEMSTATE_SIZES;
BENCHMARK(BM_PopcountXor<true>) MEMSTATE_SIZES;

}  // namespace

BENCHMARK_MAIN();
