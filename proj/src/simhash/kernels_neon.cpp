#include <arm_neon.h>

#include "tmvis/simhash/kernels.hpp"

namespace tmvis::simhash::kernels::neon {

void accumulate_votes(std::span<const Hash128> hashes,
                      std::span<const std::int32_t> weights, std::int32_t* counters) {
  int32x4_t acc[32];
  for (int q = 0; q < 32; ++q) acc[q] = vld1q_s32(counters + 4 * q);

  const uint32_t lane_bits[4] = {1, 2, 4, 8};
  const uint32x4_t lane_bit = vld1q_u32(lane_bits);
  for (std::size_t i = 0; i < hashes.size(); ++i) {
    const int32x4_t w = vdupq_n_s32(weights[i]);
    const int32x4_t neg_w = vnegq_s32(w);
    const std::uint64_t halves[2] = {hashes[i].lo, hashes[i].hi};
    for (int q = 0; q < 32; ++q) {
      const auto nibble = uint32_t((halves[q >> 4] >> (4 * (q & 15))) & 0xF);
      const uint32x4_t set = vtstq_u32(vdupq_n_u32(nibble), lane_bit);
      acc[q] = vaddq_s32(acc[q], vbslq_s32(set, w, neg_w));
    }
  }

  for (int q = 0; q < 32; ++q) vst1q_s32(counters + 4 * q, acc[q]);
}

unsigned hex_distance(const char* a, const char* b) {
  const uint8x16_t eq_lo = vceqq_u8(vld1q_u8(reinterpret_cast<const uint8_t*>(a)),
                                    vld1q_u8(reinterpret_cast<const uint8_t*>(b)));
  const uint8x16_t eq_hi = vceqq_u8(vld1q_u8(reinterpret_cast<const uint8_t*>(a + 16)),
                                    vld1q_u8(reinterpret_cast<const uint8_t*>(b + 16)));
  // Each equal lane is 0xFF; shift to 1 and sum.
  const unsigned equal = vaddvq_u8(vshrq_n_u8(eq_lo, 7)) + vaddvq_u8(vshrq_n_u8(eq_hi, 7));
  return kHexChars - equal;
}

}  // namespace tmvis::simhash::kernels::neon
