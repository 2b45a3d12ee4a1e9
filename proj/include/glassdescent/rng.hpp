#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace glassdescent {

using Rng = std::mt19937_64;

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

} // namespace detail

/// Derives a 64-bit stream seed from a list of key components.
///
/// The result is a pure function of the ordered key, so each
/// (master seed, size, P, disorder, restart) tuple names exactly one stream
/// and no two distinct tuples share one except by 64-bit hash collision.
inline std::uint64_t derive_seed(std::initializer_list<std::uint64_t> key) noexcept {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (std::uint64_t k : key)
    h = detail::splitmix64(h ^ detail::splitmix64(k));
  return h;
}

inline std::uint64_t bits_of(double v) noexcept { return std::bit_cast<std::uint64_t>(v); }

// Domain tags keep instance and run streams apart.
inline constexpr std::uint64_t kInstanceStreamTag = 0x494e5354414e4345ULL;
inline constexpr std::uint64_t kRunStreamTag = 0x52554e53545245ULL;
inline constexpr std::uint64_t kBasinStreamTag = 0x424153494eULL;

} // namespace glassdescent
