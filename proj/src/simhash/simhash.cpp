#include "tmvis/simhash/simhash.hpp"

#include <vector>

#include "tmvis/simhash/kernels.hpp"

namespace tmvis::simhash {
namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

bool is_token_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
}

}  // namespace

SimHashValue::SimHashValue(Hash128 bits) : bits_(bits) {
  for (int i = 0; i < 16; ++i) {
    hex_[i] = kHexDigits[(bits.hi >> (60 - 4 * i)) & 0xF];
    hex_[16 + i] = kHexDigits[(bits.lo >> (60 - 4 * i)) & 0xF];
  }
  hex_[32] = '\0';
}

std::optional<SimHashValue> SimHashValue::from_hex(std::string_view hex) {
  if (hex.size() != 32) return std::nullopt;
  Hash128 bits;
  for (int i = 0; i < 32; ++i) {
    const int v = hex_nibble(hex[i]);
    if (v < 0) return std::nullopt;
    std::uint64_t& half = i < 16 ? bits.hi : bits.lo;
    half = (half << 4) | std::uint64_t(v);
  }
  return SimHashValue(bits);
}

FeatureBag tokenize_html(std::string_view html) {
  FeatureBag bag;
  std::string token;
  const auto flush = [&] {
    if (!token.empty()) {
      ++bag[token];
      token.clear();
    }
  };
  for (unsigned char c : html) {
    if (c >= 'A' && c <= 'Z') c = static_cast<unsigned char>(c - 'A' + 'a');
    if (is_token_byte(c)) {
      token.push_back(char(c));
    } else {
      flush();
    }
  }
  flush();
  return bag;
}

SimHashValue simhash(const FeatureBag& bag) {
  std::vector<Hash128> hashes;
  std::vector<std::int32_t> weights;
  hashes.reserve(bag.size());
  weights.reserve(bag.size());
  for (const auto& [token, count] : bag) {
    hashes.push_back(murmur3_x64_128(token, kTokenHashSeed));
    weights.push_back(static_cast<std::int32_t>(count));
  }

  std::int32_t counters[kernels::kBits] = {};
  kernels::active().accumulate_votes(hashes, weights, counters);

  Hash128 out;
  for (unsigned k = 0; k < kernels::kBits; ++k) {
    if (counters[k] <= 0) continue;
    if (k < 64) out.lo |= std::uint64_t{1} << k;
    else out.hi |= std::uint64_t{1} << (k - 64);
  }
  return SimHashValue(out);
}

unsigned hamming_distance(const SimHashValue& a, const SimHashValue& b) {
  return kernels::active().hex_distance(a.hex_data(), b.hex_data());
}

}  // namespace tmvis::simhash
