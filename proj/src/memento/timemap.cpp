#include "tmvis/memento/timemap.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <unordered_set>

namespace tmvis::memento {

bool chronological(const MementoRecord& a, const MementoRecord& b) {
  if (a.datetime != b.datetime) return a.datetime < b.datetime;
  return a.uri_m < b.uri_m;
}

TimeMap TimeMap::normalized(std::vector<OriginalUri> uri_rs,
                            std::vector<MementoRecord> records) {
  std::vector<MementoRecord> unique;
  unique.reserve(records.size());
  std::unordered_set<std::string> seen;
  for (auto& record : records) {
    if (seen.insert(record.uri_m).second) unique.push_back(std::move(record));
  }
  std::sort(unique.begin(), unique.end(), chronological);

  std::vector<OriginalUri> distinct;
  for (auto& uri : uri_rs)
    if (std::find(distinct.begin(), distinct.end(), uri) == distinct.end())
      distinct.push_back(std::move(uri));
  return TimeMap(std::move(distinct), std::move(unique));
}

TimeMap merge_timemaps(std::span<const TimeMap> maps) {
  std::vector<OriginalUri> uri_rs;
  std::vector<MementoRecord> records;
  for (const auto& map : maps) {
    uri_rs.insert(uri_rs.end(), map.uri_rs().begin(), map.uri_rs().end());
    records.insert(records.end(), map.mementos().begin(), map.mementos().end());
  }
  return TimeMap::normalized(std::move(uri_rs), std::move(records));
}

TimeMap filter_by_date_range(const TimeMap& map, MementoDatetime start,
                             MementoDatetime end) {
  if (start > end) throw InvertedRange();
  const auto& all = map.mementos();
  const auto first = std::lower_bound(
      all.begin(), all.end(), start,
      [](const MementoRecord& r, MementoDatetime t) { return r.datetime < t; });
  const auto last = std::upper_bound(
      first, all.end(), end,
      [](MementoDatetime t, const MementoRecord& r) { return t < r.datetime; });
  return TimeMap(map.uri_rs(), std::vector<MementoRecord>(first, last));
}

TimeMap take_subsequence(const TimeMap& map, std::span<const std::size_t> positions) {
  std::vector<MementoRecord> picked;
  picked.reserve(positions.size());
  for (std::size_t i : positions) picked.push_back(map.mementos().at(i));
  return TimeMap(map.uri_rs(), std::move(picked));
}

std::size_t Histogram::total() const {
  std::size_t sum = 0;
  for (const auto& bin : bins) sum += bin.count;
  return sum;
}

Histogram build_histogram(std::span<const MementoDatetime> datetimes) {
  using namespace std::chrono;
  Histogram histogram;
  if (datetimes.empty()) return histogram;

  std::map<year_month, std::size_t> counts;
  for (const auto& dt : datetimes) {
    const year_month_day ymd{floor<days>(dt.instant())};
    ++counts[ymd.year() / ymd.month()];
  }
  const year_month first = counts.begin()->first;
  const year_month last = counts.rbegin()->first;
  for (year_month ym = first; ym <= last; ym += months{1}) {
    const auto it = counts.find(ym);
    const auto label =
        MementoDatetime(sys_days{ym / day{1}}).year_month();
    histogram.bins.push_back({label, it == counts.end() ? 0 : it->second});
  }
  return histogram;
}

Histogram build_histogram(const TimeMap& map) {
  std::vector<MementoDatetime> datetimes;
  datetimes.reserve(map.size());
  for (const auto& record : map.mementos()) datetimes.push_back(record.datetime);
  return build_histogram(datetimes);
}

}  // namespace tmvis::memento
