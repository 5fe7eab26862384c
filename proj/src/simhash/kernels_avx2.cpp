// Compiled with -mavx2; only reached after a runtime CPU check.

#include <immintrin.h>

#include "tmvis/simhash/kernels.hpp"

namespace tmvis::simhash::kernels::avx2 {

void accumulate_votes(std::span<const Hash128> hashes,
                      std::span<const std::int32_t> weights, std::int32_t* counters) {
  __m256i acc[16];
  for (int g = 0; g < 16; ++g)
    acc[g] = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(counters + 8 * g));

  const __m256i lane_bit = _mm256_setr_epi32(1, 2, 4, 8, 16, 32, 64, 128);
  for (std::size_t i = 0; i < hashes.size(); ++i) {
    const __m256i w = _mm256_set1_epi32(weights[i]);
    const std::uint64_t halves[2] = {hashes[i].lo, hashes[i].hi};
    for (int g = 0; g < 16; ++g) {
      const int byte = int((halves[g >> 3] >> (8 * (g & 7))) & 0xFF);
      const __m256i v = _mm256_and_si256(_mm256_set1_epi32(byte), lane_bit);
      // clear = all ones in lanes whose bit is 0; (w ^ clear) - clear is -w there.
      const __m256i clear = _mm256_cmpeq_epi32(v, _mm256_setzero_si256());
      const __m256i delta = _mm256_sub_epi32(_mm256_xor_si256(w, clear), clear);
      acc[g] = _mm256_add_epi32(acc[g], delta);
    }
  }

  for (int g = 0; g < 16; ++g)
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(counters + 8 * g), acc[g]);
}

unsigned hex_distance(const char* a, const char* b) {
  const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a));
  const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b));
  const auto equal = static_cast<unsigned>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(va, vb)));
  return kHexChars - unsigned(_mm_popcnt_u32(equal));
}

}  // namespace tmvis::simhash::kernels::avx2
