#include "tmvis/summarizer.hpp"

#include <algorithm>
#include <map>

namespace tmvis::summary {
namespace {

std::vector<simhash::SimHashValue> hashes_of(std::span<const FingerprintedMemento> fps) {
  std::vector<simhash::SimHashValue> hashes;
  hashes.reserve(fps.size());
  for (const auto& fp : fps) hashes.push_back(fp.simhash);
  return hashes;
}

}  // namespace

const ThresholdSummary* SummaryMenu::find(std::size_t count) const {
  for (const auto& option : options)
    if (option.count == count) return &option.summary;
  if (three_option && count == three_option->indices.size()) return &*three_option;
  return nullptr;
}

ThresholdSummary select_representatives(std::span<const simhash::SimHashValue> hashes,
                                        unsigned threshold) {
  if (hashes.empty()) throw EmptyInput();
  if (threshold < kMinThreshold || threshold > kMaxThreshold)
    throw std::out_of_range("threshold must lie in 1..32");

  ThresholdSummary summary{threshold, {0}};
  std::size_t baseline = 0;
  for (std::size_t i = 1; i < hashes.size(); ++i) {
    if (simhash::hamming_distance(hashes[baseline], hashes[i]) >= threshold) {
      summary.indices.push_back(i);
      baseline = i;
    }
  }
  return summary;
}

ThresholdSummary select_representatives(std::span<const FingerprintedMemento> fps,
                                        unsigned threshold) {
  return select_representatives(hashes_of(fps), threshold);
}

SummaryMenu enumerate_menu(std::span<const simhash::SimHashValue> hashes) {
  if (hashes.empty()) throw EmptyInput();

  // Ascending threshold order; the first summary seen for a count wins.
  std::map<std::size_t, ThresholdSummary, std::greater<>> by_count;
  for (unsigned t = kMinThreshold; t <= kMaxThreshold; ++t) {
    auto summary = select_representatives(hashes, t);
    by_count.try_emplace(summary.indices.size(), std::move(summary));
  }

  SummaryMenu menu;
  for (auto& [count, summary] : by_count) menu.options.push_back({count, std::move(summary)});

  const ThresholdSummary& smallest = menu.options.back().summary;
  if (smallest.indices.size() > kThreeOptionMinimum) {
    const auto picks = pick_three(smallest);
    menu.three_option = ThresholdSummary{smallest.threshold, {picks.begin(), picks.end()}};
  }
  return menu;
}

SummaryMenu enumerate_menu(std::span<const FingerprintedMemento> fps) {
  return enumerate_menu(hashes_of(fps));
}

std::array<std::size_t, 3> pick_three(const ThresholdSummary& summary) {
  const auto& idx = summary.indices;
  if (idx.size() <= kThreeOptionMinimum) throw TooFewRepresentatives();
  return {idx.front(), idx[(idx.size() - 1) / 2], idx.back()};
}

}  // namespace tmvis::summary
