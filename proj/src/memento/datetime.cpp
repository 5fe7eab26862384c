#include "tmvis/memento/datetime.hpp"

#include <array>
#include <cctype>
#include <cstdio>

namespace tmvis::memento {
namespace {

using namespace std::chrono;

constexpr std::array<std::string_view, 7> kWeekdays = {"Sun", "Mon", "Tue", "Wed",
                                                       "Thu", "Fri", "Sat"};
constexpr std::array<std::string_view, 12> kMonths = {
    "Jan", "Feb", "Mar", "Apr", "May", "Jun",
    "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

struct Civil {
  int year;
  unsigned month, day, hour, minute, second;
};

Civil to_civil(sys_seconds t) {
  const auto day_point = floor<days>(t);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{t - day_point};
  return {int(ymd.year()), unsigned(ymd.month()), unsigned(ymd.day()),
          unsigned(hms.hours().count()), unsigned(hms.minutes().count()),
          unsigned(hms.seconds().count())};
}

std::optional<MementoDatetime> make_checked(int y, unsigned mo, unsigned d, unsigned h,
                                            unsigned mi, unsigned s) {
  const year_month_day ymd{year{y}, month{mo}, day{d}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60) return std::nullopt;
  // Leap seconds are folded onto :59.
  if (s == 60) s = 59;
  return MementoDatetime(sys_days{ymd} + hours{h} + minutes{mi} + seconds{s});
}

bool read_uint(std::string_view& text, std::size_t width, unsigned& out) {
  if (text.size() < width) return false;
  unsigned value = 0;
  for (std::size_t i = 0; i < width; ++i) {
    const char c = text[i];
    if (c < '0' || c > '9') return false;
    value = value * 10 + unsigned(c - '0');
  }
  text.remove_prefix(width);
  out = value;
  return true;
}

bool eat(std::string_view& text, char c) {
  if (text.empty() || text.front() != c) return false;
  text.remove_prefix(1);
  return true;
}

void skip_spaces(std::string_view& text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
    text.remove_prefix(1);
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  return true;
}

}  // namespace

MementoDatetime MementoDatetime::from_civil(int y, unsigned mo, unsigned d, unsigned h,
                                            unsigned mi, unsigned s) {
  return MementoDatetime(sys_days{year{y} / month{mo} / day{d}} + hours{h} +
                         minutes{mi} + seconds{s});
}

std::optional<MementoDatetime> MementoDatetime::parse_rfc1123(std::string_view text) {
  // Sun, 06 Nov 1994 08:49:37 GMT
  skip_spaces(text);
  if (text.size() < 4) return std::nullopt;
  bool weekday_ok = false;
  for (auto name : kWeekdays)
    if (iequals(text.substr(0, 3), name)) weekday_ok = true;
  if (!weekday_ok) return std::nullopt;
  text.remove_prefix(3);
  if (!eat(text, ',')) return std::nullopt;
  skip_spaces(text);

  unsigned d = 0, y = 0, h = 0, mi = 0, s = 0;
  if (!read_uint(text, 2, d) && !read_uint(text, 1, d)) return std::nullopt;
  skip_spaces(text);
  if (text.size() < 3) return std::nullopt;
  unsigned mo = 0;
  for (unsigned i = 0; i < kMonths.size(); ++i)
    if (iequals(text.substr(0, 3), kMonths[i])) mo = i + 1;
  if (mo == 0) return std::nullopt;
  text.remove_prefix(3);
  skip_spaces(text);
  if (!read_uint(text, 4, y)) return std::nullopt;
  skip_spaces(text);
  if (!read_uint(text, 2, h) || !eat(text, ':') || !read_uint(text, 2, mi) ||
      !eat(text, ':') || !read_uint(text, 2, s))
    return std::nullopt;
  skip_spaces(text);
  if (!(iequals(text, "GMT") || iequals(text, "UTC"))) return std::nullopt;
  return make_checked(int(y), mo, d, h, mi, s);
}

std::optional<MementoDatetime> MementoDatetime::parse_14digit(std::string_view text) {
  if (text.size() != 14) return std::nullopt;
  unsigned y, mo, d, h, mi, s;
  if (!read_uint(text, 4, y) || !read_uint(text, 2, mo) || !read_uint(text, 2, d) ||
      !read_uint(text, 2, h) || !read_uint(text, 2, mi) || !read_uint(text, 2, s))
    return std::nullopt;
  return make_checked(int(y), mo, d, h, mi, s);
}

std::optional<MementoDatetime> MementoDatetime::parse_flexible(std::string_view text,
                                                               bool end_of_day) {
  if (auto dt = parse_14digit(text)) return dt;
  if (auto dt = parse_rfc1123(text)) return dt;
  std::string_view rest = text;
  unsigned y, mo, d;
  if (!read_uint(rest, 4, y) || !eat(rest, '-') || !read_uint(rest, 2, mo) ||
      !eat(rest, '-') || !read_uint(rest, 2, d))
    return std::nullopt;
  if (rest.empty()) {
    return end_of_day ? make_checked(int(y), mo, d, 23, 59, 59)
                      : make_checked(int(y), mo, d, 0, 0, 0);
  }
  unsigned h, mi, s;
  if (!(eat(rest, 'T') || eat(rest, ' ')) || !read_uint(rest, 2, h) || !eat(rest, ':') ||
      !read_uint(rest, 2, mi) || !eat(rest, ':') || !read_uint(rest, 2, s))
    return std::nullopt;
  if (!(rest.empty() || rest == "Z")) return std::nullopt;
  return make_checked(int(y), mo, d, h, mi, s);
}

std::string MementoDatetime::rfc1123() const {
  const Civil c = to_civil(instant_);
  const weekday wd{floor<days>(instant_)};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%s, %02u %s %04d %02u:%02u:%02u GMT",
                kWeekdays[wd.c_encoding()].data(), c.day, kMonths[c.month - 1].data(),
                c.year, c.hour, c.minute, c.second);
  return buf;
}

std::string MementoDatetime::digits14() const {
  const Civil c = to_civil(instant_);
  char buf[24];
  std::snprintf(buf, sizeof buf, "%04d%02u%02u%02u%02u%02u", c.year, c.month, c.day,
                c.hour, c.minute, c.second);
  return buf;
}

std::string MementoDatetime::iso8601() const {
  const Civil c = to_civil(instant_);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02u:%02u:%02uZ", c.year, c.month,
                c.day, c.hour, c.minute, c.second);
  return buf;
}

std::string MementoDatetime::year_month() const {
  const Civil c = to_civil(instant_);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u", c.year, c.month);
  return buf;
}

}  // namespace tmvis::memento
