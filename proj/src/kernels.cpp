#include "memstate/kernels.hpp"

#include <atomic>
#include <bit>

#ifdef MEMSTATE_HAVE_OPENMP
#include <omp.h>
#endif

namespace memstate::kernels {

namespace {

// Mixed sites (a != b) take the noise bit; agreeing sites pass through.
inline std::uint64_t bundle_word(std::uint64_t a, std::uint64_t b, std::uint64_t noise) {
  return (a & b) | ((a ^ b) & noise);
}

inline std::uint64_t masked(std::size_t w, std::size_t n, std::uint64_t value, std::uint64_t tail) {
  return w + 1 == n ? value & tail : value;
}

}  // namespace

namespace serial {

std::uint64_t popcount(Words a) {
  std::uint64_t total = 0;
  for (auto w : a) total += static_cast<std::uint64_t>(std::popcount(w));
  return total;
}

std::uint64_t popcount_xor(Words a, Words b) {
  std::uint64_t total = 0;
  for (std::size_t w = 0; w < a.size(); ++w)
    total += static_cast<std::uint64_t>(std::popcount(a[w] ^ b[w]));
  return total;
}

std::uint64_t popcount_and(Words a, Words b) {
  std::uint64_t total = 0;
  for (std::size_t w = 0; w < a.size(); ++w)
    total += static_cast<std::uint64_t>(std::popcount(a[w] & b[w]));
  return total;
}

void xnor(Words a, Words b, OutWords out, std::uint64_t tail) {
  for (std::size_t w = 0; w < a.size(); ++w) out[w] = masked(w, a.size(), ~(a[w] ^ b[w]), tail);
}

void bernoulli(OutWords out, NoiseBlock noise, Probability32 p, std::uint64_t tail) {
  for (std::size_t w = 0; w < out.size(); ++w) {
    auto draws = noise.word(w);
    out[w] = masked(w, out.size(), bernoulli_word(draws, p), tail);
  }
}

void bundle(Words a, Words b, OutWords out, NoiseBlock noise, Probability32 theta) {
  for (std::size_t w = 0; w < a.size(); ++w) {
    auto draws = noise.word(w);
    out[w] = bundle_word(a[w], b[w], bernoulli_word(draws, theta));
  }
}

void flip(Words a, OutWords out, NoiseBlock noise, Probability32 epsilon, std::uint64_t tail) {
  for (std::size_t w = 0; w < a.size(); ++w) {
    auto draws = noise.word(w);
    out[w] = masked(w, a.size(), a[w] ^ bernoulli_word(draws, epsilon), tail);
  }
}

}  // namespace serial

namespace parallel {

namespace {

std::atomic<std::size_t> g_min_words{kParallelMinWords};
std::atomic<int> g_max_threads{0};

#ifdef MEMSTATE_HAVE_OPENMP
bool go_parallel(std::size_t n) {
  return n >= g_min_words.load(std::memory_order_relaxed) && !omp_in_parallel();
}
int thread_budget() {
  const int t = g_max_threads.load(std::memory_order_relaxed);
  return t > 0 ? t : omp_get_max_threads();
}
#endif

}  // namespace

void set_max_threads(int threads) { g_max_threads.store(threads < 0 ? 0 : threads); }
void set_min_words(std::size_t words) { g_min_words.store(words); }
std::size_t min_words() { return g_min_words.load(); }

#ifdef MEMSTATE_HAVE_OPENMP

std::uint64_t popcount(Words a) {
  const auto n = static_cast<std::ptrdiff_t>(a.size());
  std::uint64_t total = 0;
#pragma omp parallel for reduction(+ : total) schedule(static) if (go_parallel(a.size())) num_threads(thread_budget())
  for (std::ptrdiff_t w = 0; w < n; ++w) total += static_cast<std::uint64_t>(std::popcount(a[w]));
  return total;
}

std::uint64_t popcount_xor(Words a, Words b) {
  const auto n = static_cast<std::ptrdiff_t>(a.size());
  std::uint64_t total = 0;
#pragma omp parallel for reduction(+ : total) schedule(static) if (go_parallel(a.size())) num_threads(thread_budget())
  for (std::ptrdiff_t w = 0; w < n; ++w)
    total += static_cast<std::uint64_t>(std::popcount(a[w] ^ b[w]));
  return total;
}

std::uint64_t popcount_and(Words a, Words b) {
  const auto n = static_cast<std::ptrdiff_t>(a.size());
  std::uint64_t total = 0;
#pragma omp parallel for reduction(+ : total) schedule(static) if (go_parallel(a.size())) num_threads(thread_budget())
  for (std::ptrdiff_t w = 0; w < n; ++w)
    total += static_cast<std::uint64_t>(std::popcount(a[w] & b[w]));
  return total;
}

void xnor(Words a, Words b, OutWords out, std::uint64_t tail) {
  const auto n = static_cast<std::ptrdiff_t>(a.size());
#pragma omp parallel for schedule(static) if (go_parallel(a.size())) num_threads(thread_budget())
  for (std::ptrdiff_t w = 0; w < n; ++w) out[w] = ~(a[w] ^ b[w]);
  if (n > 0) out[n - 1] &= tail;
}

void bernoulli(OutWords out, NoiseBlock noise, Probability32 p, std::uint64_t tail) {
  const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static) if (go_parallel(out.size())) num_threads(thread_budget())
  for (std::ptrdiff_t w = 0; w < n; ++w) {
    auto draws = noise.word(static_cast<std::uint64_t>(w));
    out[w] = bernoulli_word(draws, p);
  }
  if (n > 0) out[n - 1] &= tail;
}

void bundle(Words a, Words b, OutWords out, NoiseBlock noise, Probability32 theta) {
  const auto n = static_cast<std::ptrdiff_t>(a.size());
#pragma omp parallel for schedule(static) if (go_parallel(a.size())) num_threads(thread_budget())
  for (std::ptrdiff_t w = 0; w < n; ++w) {
    auto draws = noise.word(static_cast<std::uint64_t>(w));
    out[w] = bundle_word(a[w], b[w], bernoulli_word(draws, theta));
  }
}

void flip(Words a, OutWords out, NoiseBlock noise, Probability32 epsilon, std::uint64_t tail) {
  const auto n = static_cast<std::ptrdiff_t>(a.size());
#pragma omp parallel for schedule(static) if (go_parallel(a.size())) num_threads(thread_budget())
  for (std::ptrdiff_t w = 0; w < n; ++w) {
    auto draws = noise.word(static_cast<std::uint64_t>(w));
    out[w] = a[w] ^ bernoulli_word(draws, epsilon);
  }
  if (n > 0) out[n - 1] &= tail;
}

#else

std::uint64_t popcount(Words a) { return serial::popcount(a); }
std::uint64_t popcount_xor(Words a, Words b) { return serial::popcount_xor(a, b); }
std::uint64_t popcount_and(Words a, Words b) { return serial::popcount_and(a, b); }
void xnor(Words a, Words b, OutWords out, std::uint64_t tail) { serial::xnor(a, b, out, tail); }
void bernoulli(OutWords out, NoiseBlock noise, Probability32 p, std::uint64_t tail) {
  serial::bernoulli(out, noise, p, tail);
}
void bundle(Words a, Words b, OutWords out, NoiseBlock noise, Probability32 theta) {
  serial::bundle(a, b, out, noise, theta);
}
void flip(Words a, OutWords out, NoiseBlock noise, Probability32 epsilon, std::uint64_t tail) {
  serial::flip(a, out, noise, epsilon, tail);
}

#endif

}  // namespace parallel

}  // namespace memstate::kernels
