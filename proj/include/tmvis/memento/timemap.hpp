#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tmvis/memento/datetime.hpp"
#include "tmvis/memento/uri.hpp"

namespace tmvis::memento {

/// One archived capture (URI-M) of an original resource.
struct MementoRecord {
  std::string uri_m;
  MementoDatetime datetime;
  OriginalUri source_uri_r;

  friend bool operator==(const MementoRecord&, const MementoRecord&) = default;
};

/// Strict weak order used everywhere mementos are sorted: datetime, then uri_m.
bool chronological(const MementoRecord& a, const MementoRecord& b);

/// Datetime-ordered memento list for one or more URI-Rs.
///
/// Invariants: records sorted by (datetime, uri_m); uri_m values unique.
/// Construct through `TimeMap::normalized` or the free functions below, which
/// all establish them.
class TimeMap {
 public:
  TimeMap() = default;

  /// Sorts `records` and drops repeated uri_m values. When two records share
  /// a uri_m the one appearing earlier in `records` is kept.
  static TimeMap normalized(std::vector<OriginalUri> uri_rs,
                            std::vector<MementoRecord> records);

  const std::vector<OriginalUri>& uri_rs() const { return uri_rs_; }
  const std::vector<MementoRecord>& mementos() const { return mementos_; }
  std::size_t size() const { return mementos_.size(); }
  bool empty() const { return mementos_.empty(); }

  friend bool operator==(const TimeMap&, const TimeMap&) = default;

 private:
  TimeMap(std::vector<OriginalUri> uri_rs, std::vector<MementoRecord> mementos)
      : uri_rs_(std::move(uri_rs)), mementos_(std::move(mementos)) {}

  friend TimeMap filter_by_date_range(const TimeMap&, MementoDatetime, MementoDatetime);
  friend TimeMap take_subsequence(const TimeMap&, std::span<const std::size_t>);

  std::vector<OriginalUri> uri_rs_;
  std::vector<MementoRecord> mementos_;
};

class InvertedRange : public std::invalid_argument {
 public:
  InvertedRange() : std::invalid_argument("date range start is after its end") {}
};

/// Union of all mementos in global chronological order. uri_rs is the ordered
/// union; a uri_m present in several maps keeps the record of the earliest map.
TimeMap merge_timemaps(std::span<const TimeMap> maps);

/// Keeps mementos with start <= datetime <= end. Throws InvertedRange.
TimeMap filter_by_date_range(const TimeMap& map, MementoDatetime start,
                             MementoDatetime end);

/// Records at the given ascending positions; uri_rs is carried over.
TimeMap take_subsequence(const TimeMap& map, std::span<const std::size_t> positions);

struct HistogramBin {
  std::string year_month;  // "YYYY-MM"
  std::size_t count = 0;

  friend bool operator==(const HistogramBin&, const HistogramBin&) = default;
};

/// Monthly counts from the first to the last memento's month, empty months
/// included.
struct Histogram {
  std::vector<HistogramBin> bins;

  std::size_t total() const;
};

Histogram build_histogram(const TimeMap& map);
Histogram build_histogram(std::span<const MementoDatetime> datetimes);

}  // namespace tmvis::memento
