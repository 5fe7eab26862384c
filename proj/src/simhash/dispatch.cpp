#include <cstdlib>
#include <stdexcept>
#include <string>

#include "tmvis/simhash/kernels.hpp"

namespace tmvis::simhash::kernels {
namespace {

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(TMVIS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(TMVIS_HAVE_NEON)
      return true;  // mandatory on AArch64
#else
      return false;
#endif
  }
  return false;
}

KernelTable select_best() {
  if (const char* forced = std::getenv("TMVIS_SIMD"); forced && std::string(forced) == "scalar")
    return table_for(Isa::Scalar);
  const auto isas = available_isas();
  return table_for(isas.back());
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

std::vector<Isa> available_isas() {
  std::vector<Isa> isas{Isa::Scalar};
  for (Isa isa : {Isa::Avx2, Isa::Neon})
    if (cpu_supports(isa)) isas.push_back(isa);
  return isas;
}

KernelTable table_for(Isa isa) {
  if (!cpu_supports(isa))
    throw std::invalid_argument("kernel variant not available: " + std::string(isa_name(isa)));
  switch (isa) {
#if defined(TMVIS_HAVE_AVX2)
    case Isa::Avx2:
      return {isa, &avx2::accumulate_votes, &avx2::hex_distance};
#endif
#if defined(TMVIS_HAVE_NEON)
    case Isa::Neon:
      return {isa, &neon::accumulate_votes, &neon::hex_distance};
#endif
    default:
      return {Isa::Scalar, &scalar::accumulate_votes, &scalar::hex_distance};
  }
}

const KernelTable& active() {
  static const KernelTable table = select_best();
  return table;
}

}  // namespace tmvis::simhash::kernels
