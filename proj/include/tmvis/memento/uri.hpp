#pragma once

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tmvis::memento {

class InvalidUri : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Pieces of an absolute http(s) URL, enough to drive an HTTP client.
struct UrlParts {
  std::string scheme;     // "http" or "https"
  std::string host;
  int port = 0;           // explicit or scheme default
  std::string target;     // path + query, at least "/"

  /// `scheme://host:port`
  std::string origin() const;
};

std::optional<UrlParts> split_url(std::string_view url);

/// Percent-encodes every byte outside [A-Za-z0-9._-].
std::string percent_encode_strict(std::string_view text);
/// Encoding for query-string values (also keeps `~`).
std::string encode_query_value(std::string_view text);
std::string percent_decode(std::string_view text);

/// URI-R: the live-web resource a TimeMap describes.
class OriginalUri {
 public:
  /// Throws InvalidUri unless `value` is an absolute http(s) URI with a host.
  explicit OriginalUri(std::string value);
  static std::optional<OriginalUri> try_parse(std::string value);

  const std::string& str() const { return value_; }

  friend auto operator<=>(const OriginalUri&, const OriginalUri&) = default;

 private:
  std::string value_;
};

enum class ArchiveKind { InternetArchive, ArchiveIt };

struct ArchiveSource {
  ArchiveKind kind = ArchiveKind::InternetArchive;
  std::string collection = "all";

  static ArchiveSource internet_archive() { return {}; }
  /// Throws std::invalid_argument unless collection is "all" or decimal digits.
  static ArchiveSource archive_it(std::string collection = "all");

  /// Short label used in cache file names: "ia" or "ait".
  std::string label() const;

  friend bool operator==(const ArchiveSource&, const ArchiveSource&) = default;
};

/// Parses the API's archive selector ("ia" / "ait"); empty collection means "all".
std::optional<ArchiveSource> parse_archive(std::string_view name,
                                           std::string_view collection);

}  // namespace tmvis::memento
