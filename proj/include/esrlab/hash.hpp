#pragma once

#include <bit>
#include <cstdint>
#include <string_view>

namespace esr {

// splitmix64 finalizer; used everywhere a platform-independent 64-bit mix is needed.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) noexcept {
  return mix64(seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)));
}

/// Bit pattern of a double with -0.0 folded onto 0.0 and all NaNs onto one payload.
inline std::uint64_t canonical_bits(double v) noexcept {
  if (v == 0.0) return 0;
  if (v != v) return 0x7ff8000000000000ULL;
  return std::bit_cast<std::uint64_t>(v);
}

inline std::uint64_t hash_string(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return mix64(h);
}

}  // namespace esr
