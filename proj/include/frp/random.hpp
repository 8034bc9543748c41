#pragma once

#include <cstdint>
#include <random>

namespace frp {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of the independent stream for work item `index` under `root`.
///
/// Every Monte-Carlo trial, experiment seed and environment slot gets its own
/// generator seeded with derive_seed(root, index), so results do not depend on
/// scheduling or thread count.
constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) noexcept {
  return mix64(mix64(root) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

inline Rng make_rng(std::uint64_t root, std::uint64_t index) {
  return Rng{derive_seed(root, index)};
}

}  // namespace frp
