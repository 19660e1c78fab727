#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace aspinn {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Used to derive independent stream seeds from counters.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Deterministic seed derived from a base seed and an ordered list of keys,
/// e.g. derive_seed(base, {rep, iteration, location}).
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys) noexcept;

inline Rng make_rng(std::uint64_t base, std::initializer_list<std::uint64_t> keys) {
  return Rng(derive_seed(base, keys));
}

/// Stream tags so that seeds derived for different purposes never collide.
namespace stream {
inline constexpr std::uint64_t kInitialData = 0x1001;
inline constexpr std::uint64_t kNoise = 0x1002;
inline constexpr std::uint64_t kSeasons = 0x1003;
inline constexpr std::uint64_t kPolicy = 0x1004;
inline constexpr std::uint64_t kEvaluation = 0x1005;
}  // namespace stream

}  // namespace aspinn
