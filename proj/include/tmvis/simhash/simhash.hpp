#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "tmvis/simhash/hash128.hpp"

namespace tmvis::simhash {

/// 128-bit SimHash fingerprint. Its canonical serialized form, in caches and
/// API payloads alike, is 32 lowercase hex characters.
class SimHashValue {
 public:
  SimHashValue() : SimHashValue(Hash128{}) {}
  explicit SimHashValue(Hash128 bits);

  /// Accepts exactly 32 hex digits (either case); the stored form is lowercase.
  static std::optional<SimHashValue> from_hex(std::string_view hex);

  const Hash128& bits() const { return bits_; }
  std::string_view hex() const { return {hex_.data(), 32}; }
  /// Null-terminated, 32 chars; what the distance kernels read.
  const char* hex_data() const { return hex_.data(); }

  friend bool operator==(const SimHashValue& a, const SimHashValue& b) {
    return a.bits_ == b.bits_;
  }

 private:
  Hash128 bits_;
  std::array<char, 33> hex_{};
};

/// Token multiset; values are occurrence counts (always >= 1).
using FeatureBag = std::map<std::string, std::uint32_t>;

/// Lowercases ASCII letters and splits on every byte outside [a-z0-9], so
/// markup punctuation separates tag and attribute names into tokens and any
/// non-ASCII (UTF-8 multi-byte) sequence acts as a separator.
FeatureBag tokenize_html(std::string_view html);

/// Charikar SimHash: every token votes its weight for each bit of its
/// MurmurHash3 x64_128 value; a bit is 1 iff its vote total is positive.
SimHashValue simhash(const FeatureBag& bag);

inline SimHashValue simhash_html(std::string_view html) {
  return simhash(tokenize_html(html));
}

/// Number of hex-character positions (0..32) at which the two renderings
/// differ. This is deliberately not the bit-level distance.
unsigned hamming_distance(const SimHashValue& a, const SimHashValue& b);

}  // namespace tmvis::simhash
