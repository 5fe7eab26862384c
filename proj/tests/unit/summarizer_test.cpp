#include <doctest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "tmvis/summarizer.hpp"

using namespace tmvis::simhash;
using namespace tmvis::summary;

namespace {

std::vector<SimHashValue> random_fingerprints(std::mt19937_64& rng, std::size_t n) {
  // Mix of near-duplicates and fresh values so every threshold matters.
  std::vector<SimHashValue> out;
  Hash128 current{rng(), rng()};
  for (std::size_t i = 0; i < n; ++i) {
    if (rng() % 4 == 0) {
      current = {rng(), rng()};
    } else {
      const unsigned flips = unsigned(rng() % 8);
      for (unsigned f = 0; f < flips; ++f) {
        const unsigned k = unsigned(rng() % 128);
        if (k < 64) current.lo ^= std::uint64_t(1) << k;
        else current.hi ^= std::uint64_t(1) << (k - 64);
      }
    }
    out.emplace_back(current);
  }
  return out;
}

std::vector<std::string> hexes(const std::vector<SimHashValue>& v) {
  std::vector<std::string> out;
  for (const auto& h : v) out.emplace_back(h.hex());
  return out;
}

}  // namespace

TEST_CASE("greedy selection matches the oracle at every threshold") {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 300; ++trial) {
    const auto fps = random_fingerprints(rng, 1 + rng() % 80);
    const auto hx = hexes(fps);
    for (unsigned t = kMinThreshold; t <= kMaxThreshold; ++t) {
      const auto got = select_representatives(fps, t);
      CHECK(got.threshold == t);
      CHECK(got.indices == tmvis::testing::selection_oracle(hx, t));
    }
  }
}

TEST_CASE("selection edge cases") {
  CHECK_THROWS_AS(select_representatives(std::span<const SimHashValue>{}, 4), EmptyInput);
  const std::vector<SimHashValue> one{SimHashValue(Hash128{1, 2})};
  CHECK_THROWS_AS(select_representatives(one, 0), std::out_of_range);
  CHECK_THROWS_AS(select_representatives(one, 33), std::out_of_range);
  CHECK(select_representatives(one, 32).indices == std::vector<std::size_t>{0});
  // Identical fingerprints collapse to the first.
  const std::vector<SimHashValue> same(5, SimHashValue(Hash128{7, 7}));
  CHECK(select_representatives(same, 1).indices == std::vector<std::size_t>{0});
  // The baseline moves to each pick: a drifting sequence where consecutive
  // values differ by 2 hex positions is fully kept at threshold 2.
  std::vector<SimHashValue> drift;
  std::string hex(32, '0');
  for (int i = 0; i < 5; ++i) {
    drift.push_back(*SimHashValue::from_hex(hex));
    hex[2 * std::size_t(i)] = 'f';
    hex[2 * std::size_t(i) + 1] = 'f';
  }
  CHECK(select_representatives(drift, 2).indices.size() == 5);
  CHECK(select_representatives(drift, 3).indices == std::vector<std::size_t>{0, 2, 4});
}

TEST_CASE("menu keeps the smallest threshold per distinct count") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const auto fps = random_fingerprints(rng, 1 + rng() % 64);
    const auto hx = hexes(fps);
    const auto menu = enumerate_menu(fps);
    REQUIRE_FALSE(menu.options.empty());
    std::set<std::size_t> seen;
    for (std::size_t i = 0; i < menu.options.size(); ++i) {
      const auto& o = menu.options[i];
      if (i > 0) CHECK(o.count < menu.options[i - 1].count);
      CHECK(o.count == o.summary.indices.size());
      // No smaller threshold yields the same count.
      for (unsigned t = kMinThreshold; t < o.summary.threshold; ++t)
        CHECK(tmvis::testing::selection_oracle(hx, t).size() != o.count);
      CHECK(o.summary.indices == tmvis::testing::selection_oracle(hx, o.summary.threshold));
      seen.insert(o.count);
    }
    // Every count any threshold produces is on the menu.
    for (unsigned t = kMinThreshold; t <= kMaxThreshold; ++t)
      CHECK(seen.contains(tmvis::testing::selection_oracle(hx, t).size()));

    const std::size_t smallest = menu.options.back().count;
    CHECK(menu.three_option.has_value() == (smallest > kThreeOptionMinimum));
    if (menu.three_option) CHECK(menu.find(3) == &*menu.three_option);
  }
}

TEST_CASE("three-memento option") {
  ThresholdSummary ten{5, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9}};
  CHECK(pick_three(ten) == std::array<std::size_t, 3>{0, 4, 9});
  ThresholdSummary eleven{5, {0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20}};
  CHECK(pick_three(eleven) == std::array<std::size_t, 3>{0, 10, 20});
  ThresholdSummary nine{5, {0, 1, 2, 3, 4, 5, 6, 7, 8}};
  CHECK_THROWS_AS(pick_three(nine), TooFewRepresentatives);
}
