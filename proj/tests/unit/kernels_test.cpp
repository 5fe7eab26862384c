#include <doctest.h>

#include <random>

#include "tmvis/simhash/kernels.hpp"

using namespace tmvis::simhash;
using namespace tmvis::simhash::kernels;

namespace {

std::vector<Hash128> random_hashes(std::mt19937_64& rng, std::size_t n) {
  std::vector<Hash128> out(n);
  for (auto& h : out) h = {rng(), rng()};
  return out;
}

}  // namespace

TEST_CASE("scalar kernels are always available and listed first") {
  const auto isas = available_isas();
  REQUIRE_FALSE(isas.empty());
  CHECK(isas.front() == Isa::Scalar);
  CHECK(table_for(Isa::Scalar).isa == Isa::Scalar);
  CHECK_FALSE(isa_name(active().isa).empty());
}

TEST_CASE("every available variant matches the scalar reference") {
  const KernelTable ref = table_for(Isa::Scalar);
  std::mt19937_64 rng(2024);
  for (const Isa isa : available_isas()) {
    CAPTURE(isa_name(isa));
    const KernelTable k = table_for(isa);

    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t n = rng() % 70;  // covers empty and non-multiple-of-lane sizes
      const auto hashes = random_hashes(rng, n);
      std::vector<std::int32_t> weights(n);
      for (auto& w : weights) w = 1 + std::int32_t(rng() % (trial % 5 == 0 ? 100000 : 8));
      std::int32_t a[128], b[128];
      for (int i = 0; i < 128; ++i) a[i] = b[i] = std::int32_t(rng() % 1000) - 500;
      ref.accumulate_votes(hashes, weights, a);
      k.accumulate_votes(hashes, weights, b);
      CHECK(std::equal(a, a + 128, b));
    }

    static constexpr char kHex[] = "0123456789abcdef";
    for (int trial = 0; trial < 5000; ++trial) {
      char x[33] = {}, y[33] = {};
      for (int i = 0; i < 32; ++i) {
        x[i] = kHex[rng() % 16];
        y[i] = (rng() % 3 == 0) ? kHex[rng() % 16] : x[i];
      }
      CHECK(k.hex_distance(x, y) == ref.hex_distance(x, y));
    }
  }
}

TEST_CASE("vote accumulation by hand") {
  std::int32_t counters[128] = {};
  const std::vector<Hash128> hashes{{0, 1}, {std::uint64_t(1) << 63, 3}};
  const std::vector<std::int32_t> weights{2, 5};
  for (const Isa isa : available_isas()) {
    std::fill(counters, counters + 128, 0);
    table_for(isa).accumulate_votes(hashes, weights, counters);
    CHECK(counters[0] == 7);
    CHECK(counters[1] == 3);   // -2 + 5
    CHECK(counters[2] == -7);
    CHECK(counters[127] == 3);
  }
}
