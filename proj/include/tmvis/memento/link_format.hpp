#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tmvis/memento/timemap.hpp"

namespace tmvis::memento {

/// The document is not application/link-format; nothing is salvaged.
class MalformedLinkFormat : public std::runtime_error {
 public:
  MalformedLinkFormat(std::string what, std::size_t offset)
      : std::runtime_error(std::move(what) + " at byte " + std::to_string(offset)),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// One `<target>; name="value"; ...` entry.
struct Link {
  std::string target;
  std::vector<std::pair<std::string, std::string>> params;

  /// First value of `name` (case-insensitive), or empty.
  std::string_view param(std::string_view name) const;
  /// Whether the whitespace-separated `rel` list contains `rel`.
  bool has_rel(std::string_view rel) const;
};

/// Splits a link-format body into links. Throws MalformedLinkFormat.
std::vector<Link> parse_links(std::string_view body);

struct ParsedTimeMap {
  TimeMap timemap;
  /// Memento links skipped because their datetime did not parse.
  std::size_t malformed_datetimes = 0;
  /// Target of the `original` link, when the archive sent one.
  std::string original;
};

/// Builds a TimeMap from an RFC 7089 link-format TimeMap body. Every link whose
/// rel list contains `memento` becomes a record attributed to `default_uri_r`.
ParsedTimeMap parse_link_format(std::string_view body, const OriginalUri& default_uri_r);

/// Inverse of parse_link_format for single-URI TimeMaps: an `original` link,
/// then one `memento` link per record (`first memento` / `last memento` at
/// the ends).
std::string serialize_link_format(const TimeMap& map);

}  // namespace tmvis::memento
