#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace abvr {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Named sub-streams of one master seed. Each (stream, index) pair maps to an
/// independent engine, so replication r draws the same numbers no matter which
/// thread runs it or in what order.
enum class Stream : std::uint64_t {
  Population = 1,
  Assignment = 2,
  Resample = 3,
  Source = 4,
};

using Engine = std::mt19937_64;

[[nodiscard]] std::uint64_t derive_seed(std::uint64_t master, Stream stream,
                                        std::uint64_t index) noexcept;
[[nodiscard]] Engine make_engine(std::uint64_t master, Stream stream, std::uint64_t index);

/// Standard normal draw (Boost ziggurat, identical output across standard libraries).
[[nodiscard]] double standard_normal(Engine& engine);

/// Uniform integer in [0, bound).
[[nodiscard]] std::size_t uniform_index(Engine& engine, std::size_t bound);

/// Picks exactly `count` of the slots uniformly without replacement and
/// writes 1 there, 0 elsewhere (partial Fisher-Yates).
void choose_subset(Engine& engine, std::span<std::uint8_t> flags, std::size_t count);

}  // namespace abvr
