#include "tmvis/sampler.hpp"

#include <numeric>
#include <stdexcept>

namespace tmvis::sampling {

void SamplingConfig::validate() const {
  if (max_sample < 1 || partitions < 1 || quota_per_partition < 1 ||
      min_spacing < std::chrono::seconds(1))
    throw std::invalid_argument("sampling parameters must all be at least 1");
  if (partitions * quota_per_partition != max_sample)
    throw std::invalid_argument("partitions x quota_per_partition must equal max_sample");
}

std::vector<std::size_t> sample_positions(std::span<const memento::MementoDatetime> datetimes,
                                          const SamplingConfig& config) {
  config.validate();
  const std::size_t n = datetimes.size();
  std::vector<std::size_t> picked;
  if (n <= config.max_sample) {
    picked.resize(n);
    std::iota(picked.begin(), picked.end(), std::size_t{0});
    return picked;
  }

  picked.reserve(config.max_sample);
  std::size_t quota = 0;
  for (std::size_t part = 0; part < config.partitions; ++part) {
    quota += config.quota_per_partition;
    const std::size_t begin = part * n / config.partitions;
    const std::size_t end = (part + 1) * n / config.partitions;
    std::size_t last = begin;
    for (std::size_t i = begin; i < end && quota > 0; ++i) {
      if (i == begin ||
          datetimes[i].instant() - datetimes[last].instant() >= config.min_spacing) {
        picked.push_back(i);
        last = i;
        --quota;
      }
    }
  }
  return picked;
}

memento::TimeMap sample_timemap(const memento::TimeMap& map, const SamplingConfig& config) {
  std::vector<memento::MementoDatetime> datetimes;
  datetimes.reserve(map.size());
  for (const auto& record : map.mementos()) datetimes.push_back(record.datetime);
  const auto positions = sample_positions(datetimes, config);
  if (positions.size() == map.size()) return map;
  return memento::take_subsequence(map, positions);
}

}  // namespace tmvis::sampling
