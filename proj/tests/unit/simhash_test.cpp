#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tmvis/simhash/hash128.hpp"
#include "tmvis/simhash/kernels.hpp"
#include "tmvis/simhash/simhash.hpp"

#if defined(TMVIS_HAVE_AVUTIL)
extern "C" {
#include <libavutil/mem.h>
#include <libavutil/murmur3.h>
}
#endif

using namespace tmvis::simhash;

namespace {

std::uint64_t load_le64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

Hash128 murmur_bytes(const std::vector<std::uint8_t>& data, std::uint32_t seed) {
  return murmur3_x64_128(std::span<const std::byte>(reinterpret_cast<const std::byte*>(data.data()), data.size()), seed);
}

}  // namespace

TEST_CASE("MurmurHash3 x64_128 verification value") {
  // Reference procedure: hash {}, {0}, {0,1}, ... {0..254} with seed 256 - i,
  // concatenate the 16-byte digests, hash that with seed 0 and read the first
  // four bytes little-endian.
  std::vector<std::uint8_t> digests;
  std::vector<std::uint8_t> key;
  for (int i = 0; i < 256; ++i) {
    const Hash128 h = murmur_bytes(key, std::uint32_t(256 - i));
    for (int b = 0; b < 8; ++b) digests.push_back(std::uint8_t(h.lo >> (8 * b)));
    for (int b = 0; b < 8; ++b) digests.push_back(std::uint8_t(h.hi >> (8 * b)));
    key.push_back(std::uint8_t(i));
  }
  const Hash128 final_hash = murmur_bytes(digests, 0);
  CHECK(std::uint32_t(final_hash.lo & 0xFFFFFFFFu) == 0x6384BA69u);
}

#if defined(TMVIS_HAVE_AVUTIL)
TEST_CASE("MurmurHash3 agrees with libavutil on random inputs") {
  std::mt19937_64 rng(99);
  AVMurMur3* ctx = av_murmur3_alloc();
  REQUIRE(ctx != nullptr);
  for (int trial = 0; trial < 3000; ++trial) {
    std::vector<std::uint8_t> data(rng() % 100);
    for (auto& b : data) b = std::uint8_t(rng());
    const std::uint32_t seed = trial % 3 == 0 ? kTokenHashSeed : std::uint32_t(rng());
    av_murmur3_init_seeded(ctx, seed);
    av_murmur3_update(ctx, data.data(), int(data.size()));
    std::uint8_t out[16];
    av_murmur3_final(ctx, out);
    const Hash128 ours = murmur_bytes(data, seed);
    CHECK(ours.lo == load_le64(out));
    CHECK(ours.hi == load_le64(out + 8));
  }
  av_free(ctx);
}
#endif

TEST_CASE("tokenizer lowercases and splits on everything outside [a-z0-9]") {
  const auto bag = tokenize_html("<HTML><body class=\"Main\">Hello, hello W0rld! caf\xC3\xA9</body></HTML>");
  const FeatureBag expected{{"html", 2}, {"body", 2}, {"class", 1}, {"main", 1},
                            {"hello", 2}, {"w0rld", 1}, {"caf", 1}};
  CHECK(bag == expected);
  CHECK(tokenize_html("").empty());
  CHECK(tokenize_html("<>!!  ").empty());
}

TEST_CASE("SimHash of known bags") {
  // A single token's fingerprint is its own hash.
  const auto h = murmur3_x64_128(std::string_view("token"), kTokenHashSeed);
  CHECK(simhash(FeatureBag{{"token", 3}}).bits() == h);
  // No votes at all: every bit ties at zero and is cleared.
  CHECK(simhash(FeatureBag{}).hex() == std::string(32, '0'));
  // Two tokens with equal weight: bits where they disagree tie and are 0.
  const auto a = murmur3_x64_128(std::string_view("a"), kTokenHashSeed);
  const auto b = murmur3_x64_128(std::string_view("b"), kTokenHashSeed);
  const auto both = simhash(FeatureBag{{"a", 1}, {"b", 1}}).bits();
  CHECK(both.hi == (a.hi & b.hi));
  CHECK(both.lo == (a.lo & b.lo));
}

TEST_CASE("SimHash matches a per-bit vote oracle") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 100; ++trial) {
    FeatureBag bag;
    const int n = 1 + int(rng() % 60);
    for (int i = 0; i < n; ++i) bag["t" + std::to_string(rng() % 500)] += 1 + std::uint32_t(rng() % 4);
    long long votes[128] = {};
    for (const auto& [token, weight] : bag) {
      const auto hh = murmur3_x64_128(std::string_view(token), kTokenHashSeed);
      for (unsigned k = 0; k < 128; ++k) votes[k] += hh.bit(k) ? weight : -(long long)weight;
    }
    Hash128 expected{};
    for (unsigned k = 0; k < 128; ++k) {
      if (votes[k] <= 0) continue;
      if (k < 64) expected.lo |= std::uint64_t(1) << k;
      else expected.hi |= std::uint64_t(1) << (k - 64);
    }
    CHECK(simhash(bag).bits() == expected);
  }
}

TEST_CASE("hex rendering and parsing") {
  const auto v = SimHashValue::from_hex("8C27981EAED151CFA645AD823932EAC6");
  REQUIRE(v);
  CHECK(v->hex() == "8c27981eaed151cfa645ad823932eac6");
  CHECK(v->bits().hi == 0x8c27981eaed151cfULL);
  CHECK(v->bits().lo == 0xa645ad823932eac6ULL);
  CHECK_FALSE(SimHashValue::from_hex("8c27"));
  CHECK_FALSE(SimHashValue::from_hex("zc27981eaed151cfa645ad823932eac6"));
  CHECK(SimHashValue(v->bits()) == *v);
}

TEST_CASE("hex-position distance") {
  const auto d = [](const char* a, const char* b) {
    return hamming_distance(*SimHashValue::from_hex(a), *SimHashValue::from_hex(b));
  };
  CHECK(d("fc8e53aebb9061f390aba82665581295", "d546e192eab633f4d1b4451399c8adcc") == 30);
  CHECK(d("8c27981eaed151cfa645ad823932eac6", "8c27981faad951cf8645ad823d32eac2") == 6);
  CHECK(d("8c27981faad951cf8645ad823d32eac2", "fa3799170258494b9443b9be3977a84e") == 27);
  CHECK(d("d546e192eab633f4d1b4451399c8adcc", "5e98bc5367c86f3ffaea0b8c3deb3f5d") == 32);
  // One flipped bit in each of four nibbles: 4, not a bit count.
  CHECK(d("00000000000000000000000000000000", "0000000f0000000f0000000f0000000f") == 4);

  std::mt19937_64 rng(8);
  for (int i = 0; i < 1000; ++i) {
    const SimHashValue a(Hash128{rng(), rng()});
    Hash128 nb = a.bits();
    if (rng() & 1) nb.hi ^= rng() & rng();
    else nb.lo ^= rng();
    const SimHashValue b(nb);
    const unsigned expected = tmvis::testing::hex_distance_oracle(a.hex(), b.hex());
    CHECK(hamming_distance(a, b) == expected);
    CHECK(hamming_distance(b, a) == expected);
    CHECK(hamming_distance(a, a) == 0);
  }
}

TEST_CASE("identical HTML gives identical fingerprints; small edits stay close") {
  std::mt19937_64 rng(42);
  const auto words = tmvis::testing::random_words(rng, 400);
  const auto html = tmvis::testing::as_html(words);
  CHECK(simhash_html(html) == simhash_html(html));
  const auto edited = tmvis::testing::as_html(tmvis::testing::perturb(rng, words, 0.02));
  const auto other = tmvis::testing::as_html(tmvis::testing::random_words(rng, 400));
  CHECK(hamming_distance(simhash_html(html), simhash_html(edited)) <
        hamming_distance(simhash_html(html), simhash_html(other)));
}
