#pragma once

#include <chrono>
#include <cstddef>
#include <vector>

#include "tmvis/memento/timemap.hpp"

namespace tmvis::sampling {

struct SamplingConfig {
  std::size_t max_sample = 1000;
  std::size_t partitions = 250;
  std::size_t quota_per_partition = 4;
  std::chrono::seconds min_spacing = std::chrono::hours(24 * 3);

  /// Throws std::invalid_argument unless every field is >= 1 and
  /// partitions * quota_per_partition == max_sample.
  void validate() const;
};

/// Positions (ascending) of the mementos the sampler keeps. For TimeMaps of at
/// most `max_sample` records this is every position.
///
/// Larger maps are cut into `partitions` contiguous runs [floor(i*n/P),
/// floor((i+1)*n/P)). A quota starts at `quota_per_partition` and grows by
/// that much at every run, so picks a run could not use carry forward. Each
/// run's first memento is always taken; later ones are taken only when at
/// least `min_spacing` after the run's previous pick, until the quota is
/// spent.
std::vector<std::size_t> sample_positions(std::span<const memento::MementoDatetime> datetimes,
                                          const SamplingConfig& config = {});

memento::TimeMap sample_timemap(const memento::TimeMap& map,
                                const SamplingConfig& config = {});

}  // namespace tmvis::sampling
