#include "tmvis/simhash/kernels.hpp"

namespace tmvis::simhash::kernels::scalar {

void accumulate_votes(std::span<const Hash128> hashes,
                      std::span<const std::int32_t> weights, std::int32_t* counters) {
  for (std::size_t i = 0; i < hashes.size(); ++i) {
    const Hash128 h = hashes[i];
    const std::int32_t w = weights[i];
    for (unsigned k = 0; k < kBits; ++k) counters[k] += h.bit(k) ? w : -w;
  }
}

unsigned hex_distance(const char* a, const char* b) {
  unsigned differing = 0;
  for (unsigned i = 0; i < kHexChars; ++i) differing += a[i] != b[i];
  return differing;
}

}  // namespace tmvis::simhash::kernels::scalar
