#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "tmvis/memento/timemap.hpp"
#include "tmvis/simhash/simhash.hpp"

namespace tmvis::summary {

inline constexpr unsigned kMinThreshold = 1;
inline constexpr unsigned kMaxThreshold = 32;
/// The three-memento option is offered only above this many representatives.
inline constexpr std::size_t kThreeOptionMinimum = 9;

struct FingerprintedMemento {
  memento::MementoRecord record;
  simhash::SimHashValue simhash;
};

/// Representatives chosen at one Hamming-distance threshold; positions index
/// the fingerprinted list the summary was computed from.
struct ThresholdSummary {
  unsigned threshold = 0;
  std::vector<std::size_t> indices;

  friend bool operator==(const ThresholdSummary&, const ThresholdSummary&) = default;
};

struct MenuOption {
  std::size_t count = 0;
  ThresholdSummary summary;
};

struct SummaryMenu {
  /// Distinct counts, largest first.
  std::vector<MenuOption> options;
  /// First, central and last of the smallest option, when it has more than
  /// kThreeOptionMinimum representatives. Its threshold is the source option's.
  std::optional<ThresholdSummary> three_option;

  /// Option with `count` representatives, including the three-option.
  const ThresholdSummary* find(std::size_t count) const;
};

class EmptyInput : public std::invalid_argument {
 public:
  EmptyInput() : std::invalid_argument("no fingerprinted mementos") {}
};

class TooFewRepresentatives : public std::invalid_argument {
 public:
  TooFewRepresentatives()
      : std::invalid_argument("three-memento option needs more than 9 representatives") {}
};

/// Greedy scan: position 0 is always kept and becomes the baseline; each later
/// memento is kept, and becomes the new baseline, when its distance from the
/// baseline reaches `threshold`. Throws EmptyInput; threshold outside 1..32
/// throws std::out_of_range.
ThresholdSummary select_representatives(std::span<const simhash::SimHashValue> hashes,
                                        unsigned threshold);
ThresholdSummary select_representatives(std::span<const FingerprintedMemento> fps,
                                        unsigned threshold);

/// Sweeps thresholds 1..32 and keeps, per distinct count, the summary of the
/// smallest threshold producing it.
SummaryMenu enumerate_menu(std::span<const simhash::SimHashValue> hashes);
SummaryMenu enumerate_menu(std::span<const FingerprintedMemento> fps);

/// (first, central, last) with central at position floor((L-1)/2).
/// Throws TooFewRepresentatives when L <= 9.
std::array<std::size_t, 3> pick_three(const ThresholdSummary& summary);

}  // namespace tmvis::summary
