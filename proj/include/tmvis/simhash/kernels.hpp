#pragma once

// Inner loops of the fingerprinting path, in a portable scalar form and in
// SIMD forms selected at runtime. Every variant must produce results identical
// to the scalar reference; tests/unit/kernels_test.cpp holds them to that.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "tmvis/simhash/hash128.hpp"

namespace tmvis::simhash::kernels {

inline constexpr unsigned kBits = 128;
inline constexpr unsigned kHexChars = 32;

/// counters[k] += weight if bit k of the hash is set, otherwise -= weight.
/// `hashes` and `weights` have equal length; counters holds kBits entries.
using AccumulateVotesFn = void (*)(std::span<const Hash128> hashes,
                                   std::span<const std::int32_t> weights,
                                   std::int32_t* counters);

/// Number of positions among kHexChars at which `a` and `b` differ.
using HexDistanceFn = unsigned (*)(const char* a, const char* b);

namespace scalar {
void accumulate_votes(std::span<const Hash128> hashes,
                      std::span<const std::int32_t> weights, std::int32_t* counters);
unsigned hex_distance(const char* a, const char* b);
}  // namespace scalar

#if defined(TMVIS_HAVE_AVX2)
namespace avx2 {
void accumulate_votes(std::span<const Hash128> hashes,
                      std::span<const std::int32_t> weights, std::int32_t* counters);
unsigned hex_distance(const char* a, const char* b);
}  // namespace avx2
#endif

#if defined(TMVIS_HAVE_NEON)
namespace neon {
void accumulate_votes(std::span<const Hash128> hashes,
                      std::span<const std::int32_t> weights, std::int32_t* counters);
unsigned hex_distance(const char* a, const char* b);
}  // namespace neon
#endif

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;
  AccumulateVotesFn accumulate_votes;
  HexDistanceFn hex_distance;
};

/// Variants compiled in and supported by the running CPU, scalar first.
std::vector<Isa> available_isas();

/// Throws std::invalid_argument if `isa` is not available.
KernelTable table_for(Isa isa);

/// Best available variant, chosen once. Setting TMVIS_SIMD=scalar in the
/// environment pins the scalar reference.
const KernelTable& active();

}  // namespace tmvis::simhash::kernels
