#pragma once

#include <cstdint>
#include <random>

namespace comex {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0,
                                    std::uint64_t c = 0) noexcept {
  return mix64(mix64(mix64(mix64(base) ^ a) ^ b) ^ c);
}

/// Purposes for which a run owns a separate random stream. Keeping them apart
/// lets two variants share reward draws under common random numbers.
enum class Stream : std::uint64_t {
  rewards = 1,
  bootstrap = 2,
  thompson = 3,
  graph = 4,
};

inline Rng make_stream(std::uint64_t seed, std::uint64_t run_index, Stream purpose,
                       std::uint64_t agent = 0) {
  return Rng(derive_seed(seed, run_index, static_cast<std::uint64_t>(purpose), agent));
}

inline int uniform_index(Rng& rng, int n) {
  return std::uniform_int_distribution<int>(0, n - 1)(rng);
}

}  // namespace comex
