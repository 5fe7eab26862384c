#pragma once

#include <chrono>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace tmvis::memento {

/// Capture instant of a memento, UTC with second precision.
///
/// Renders both as an RFC 1123 date (`Sun, 06 Nov 1994 08:49:37 GMT`, the form
/// used in link-format `datetime` attributes) and as the 14-digit
/// `YYYYMMDDhhmmss` timestamp embedded in archive URLs.
class MementoDatetime {
 public:
  using Seconds = std::chrono::sys_seconds;

  constexpr MementoDatetime() = default;
  constexpr explicit MementoDatetime(Seconds instant) : instant_(instant) {}

  static MementoDatetime from_civil(int year, unsigned month, unsigned day,
                                    unsigned hour = 0, unsigned minute = 0,
                                    unsigned second = 0);

  static std::optional<MementoDatetime> parse_rfc1123(std::string_view text);
  static std::optional<MementoDatetime> parse_14digit(std::string_view text);
  /// Accepts `YYYY-MM-DD`, `YYYY-MM-DDThh:mm:ssZ`, 14-digit and RFC 1123.
  /// A bare date maps to 00:00:00, or to 23:59:59 when `end_of_day` is set.
  static std::optional<MementoDatetime> parse_flexible(std::string_view text,
                                                       bool end_of_day = false);

  std::string rfc1123() const;
  std::string digits14() const;
  std::string iso8601() const;
  /// `YYYY-MM` of the UTC calendar month.
  std::string year_month() const;

  constexpr Seconds instant() const { return instant_; }
  constexpr long long epoch_seconds() const {
    return instant_.time_since_epoch().count();
  }

  friend constexpr auto operator<=>(const MementoDatetime&,
                                    const MementoDatetime&) = default;

 private:
  Seconds instant_{};
};

}  // namespace tmvis::memento
