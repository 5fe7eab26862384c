#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string_view>

namespace tmvis::simhash {

/// 128 bits as two 64-bit halves. Bit k (0..127) is bit k of `lo` for k < 64,
/// otherwise bit k-64 of `hi`. The hex rendering is hi then lo, big-endian.
struct Hash128 {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;

  constexpr bool bit(unsigned k) const {
    return k < 64 ? ((lo >> k) & 1u) : ((hi >> (k - 64)) & 1u);
  }

  friend constexpr auto operator<=>(const Hash128&, const Hash128&) = default;
};

/// Seed baked into every cached fingerprint. Changing it invalidates caches,
/// so it travels with the cache format version.
inline constexpr std::uint32_t kTokenHashSeed = 0x544d5631;  // "TMV1"

/// MurmurHash3 x64_128. The first 64-bit output word (h1) becomes `lo` and
/// the second (h2) `hi`, i.e. the 16 output bytes read as one little-endian
/// 128-bit integer.
Hash128 murmur3_x64_128(std::span<const std::byte> data, std::uint32_t seed);
Hash128 murmur3_x64_128(std::string_view text, std::uint32_t seed);

}  // namespace tmvis::simhash
