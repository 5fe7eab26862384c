#include <doctest.h>

#include <random>

#include "tmvis/memento/archive_client.hpp"
#include "tmvis/memento/datetime.hpp"
#include "tmvis/memento/link_format.hpp"
#include "tmvis/memento/timemap.hpp"
#include "tmvis/memento/uri.hpp"

using namespace tmvis::memento;

namespace {

MementoRecord rec(const std::string& uri_m, MementoDatetime dt,
                  const std::string& uri_r = "http://example.com/") {
  return {uri_m, dt, OriginalUri(uri_r)};
}

MementoDatetime day(int y, unsigned m, unsigned d, unsigned hh = 0) {
  return MementoDatetime::from_civil(y, m, d, hh);
}

}  // namespace

TEST_CASE("RFC 1123 datetimes parse and print") {
  const auto dt = MementoDatetime::parse_rfc1123("Sun, 06 Nov 1994 08:49:37 GMT");
  REQUIRE(dt);
  CHECK(dt->epoch_seconds() == 784111777);
  CHECK(dt->rfc1123() == "Sun, 06 Nov 1994 08:49:37 GMT");
  CHECK(dt->digits14() == "19941106084937");
  CHECK(dt->iso8601() == "1994-11-06T08:49:37Z");
  CHECK(dt->year_month() == "1994-11");

  CHECK_FALSE(MementoDatetime::parse_rfc1123("Sun, 06 Nov 1994 08:49:37"));
  CHECK_FALSE(MementoDatetime::parse_rfc1123("Sun, 31 Feb 1994 08:49:37 GMT"));
  CHECK_FALSE(MementoDatetime::parse_rfc1123("Sun, 06 Foo 1994 08:49:37 GMT"));
  CHECK_FALSE(MementoDatetime::parse_rfc1123(""));
}

TEST_CASE("14-digit timestamps") {
  const auto dt = MementoDatetime::parse_14digit("20160501134500");
  REQUIRE(dt);
  CHECK(*dt == MementoDatetime::from_civil(2016, 5, 1, 13, 45, 0));
  CHECK_FALSE(MementoDatetime::parse_14digit("2016050113450"));
  CHECK_FALSE(MementoDatetime::parse_14digit("20161301134500"));
  CHECK_FALSE(MementoDatetime::parse_14digit("2016050113450x"));
}

TEST_CASE("datetime formats round-trip over a wide range") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long long> secs(0, 4102444799LL);  // through 2099
  for (int i = 0; i < 2000; ++i) {
    const MementoDatetime dt{std::chrono::sys_seconds(std::chrono::seconds(secs(rng)))};
    CHECK(MementoDatetime::parse_rfc1123(dt.rfc1123()) == dt);
    CHECK(MementoDatetime::parse_14digit(dt.digits14()) == dt);
    CHECK(MementoDatetime::parse_flexible(dt.iso8601()) == dt);
  }
}

TEST_CASE("flexible parsing of range bounds") {
  CHECK(MementoDatetime::parse_flexible("2016-05-01") == day(2016, 5, 1));
  CHECK(MementoDatetime::parse_flexible("2016-05-01", true) ==
        MementoDatetime::from_civil(2016, 5, 1, 23, 59, 59));
  CHECK(MementoDatetime::parse_flexible("20160501000000") == day(2016, 5, 1));
  CHECK(MementoDatetime::parse_flexible("Sun, 01 May 2016 00:00:00 GMT") == day(2016, 5, 1));
  CHECK_FALSE(MementoDatetime::parse_flexible("May 2016"));
  CHECK_FALSE(MementoDatetime::parse_flexible("2016-13-01"));
}

TEST_CASE("original URIs must be absolute http(s)") {
  CHECK_NOTHROW(OriginalUri("http://odu.edu/"));
  CHECK_NOTHROW(OriginalUri("https://example.com:8443/a?b=c"));
  CHECK_THROWS_AS(OriginalUri("ftp://example.com/"), InvalidUri);
  CHECK_THROWS_AS(OriginalUri("example.com"), InvalidUri);
  CHECK_THROWS_AS(OriginalUri("http://"), InvalidUri);
  CHECK_FALSE(OriginalUri::try_parse("http:// spaced.com/"));
}

TEST_CASE("URL splitting") {
  auto p = split_url("https://example.com/a/b?c=d");
  REQUIRE(p);
  CHECK(p->scheme == "https");
  CHECK(p->host == "example.com");
  CHECK(p->port == 443);
  CHECK(p->target == "/a/b?c=d");
  p = split_url("http://127.0.0.1:9000");
  REQUIRE(p);
  CHECK(p->port == 9000);
  CHECK(p->target == "/");
  CHECK(p->origin() == "http://127.0.0.1:9000");
  CHECK_FALSE(split_url("mailto:x@y"));
}

TEST_CASE("percent encoding") {
  CHECK(percent_encode_strict("http://odu.edu/") == "http%3A%2F%2Fodu.edu%2F");
  CHECK(percent_encode_strict("a~b c") == "a%7Eb%20c");
  CHECK(encode_query_value("a~b c") == "a~b%20c");
  CHECK(percent_decode("http%3A%2F%2Fodu.edu%2F") == "http://odu.edu/");
  CHECK(percent_decode("a+b%2") == "a+b%2");
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    std::string s;
    for (int k = 0; k < 20; ++k) s.push_back(char(rng() & 0xFF));
    CHECK(percent_decode(percent_encode_strict(s)) == s);
  }
}

TEST_CASE("archive selectors") {
  CHECK(parse_archive("ia", "") == ArchiveSource::internet_archive());
  CHECK(parse_archive("ait", "1068")->collection == "1068");
  CHECK(parse_archive("ait", "")->collection == "all");
  CHECK_FALSE(parse_archive("bogus", ""));
  CHECK_THROWS_AS(ArchiveSource::archive_it("12a"), std::invalid_argument);
  CHECK(ArchiveSource::archive_it("5").label() == "ait");
  CHECK(ArchiveSource::internet_archive().label() == "ia");
}

TEST_CASE("TimeMap URIs per archive layout") {
  const OriginalUri u("http://odu.edu/");
  CHECK(build_timemap_uri(ArchiveSource::internet_archive(), u) ==
        "http://web.archive.org/web/timemap/link/http://odu.edu/");
  CHECK(build_timemap_uri(ArchiveSource::archive_it("1068"), u) ==
        "https://wayback.archive-it.org/1068/timemap/link/http://odu.edu/");
}

TEST_CASE("normalized TimeMaps are sorted and free of duplicate URI-Ms") {
  const auto map = TimeMap::normalized(
      {OriginalUri("http://example.com/")},
      {rec("m3", day(2012, 1, 1)), rec("m1", day(2010, 1, 1)), rec("m2", day(2011, 1, 1)),
       rec("m1", day(2015, 1, 1))});
  REQUIRE(map.size() == 3);
  CHECK(map.mementos()[0].uri_m == "m1");
  CHECK(map.mementos()[0].datetime == day(2010, 1, 1));
  CHECK(map.mementos()[2].uri_m == "m3");
}

TEST_CASE("link-format TimeMaps") {
  const std::string body =
      "<http://odu.edu/>; rel=\"original\",\n"
      "<http://web.archive.org/web/timemap/link/http://odu.edu/>; rel=\"self\"; "
      "type=\"application/link-format\"; from=\"Mon, 01 Jan 2001 00:00:00 GMT\",\n"
      "<http://web.archive.org/web/20010101000000/http://odu.edu/>; rel=\"first memento\"; "
      "datetime=\"Mon, 01 Jan 2001 00:00:00 GMT\",\n"
      "<http://web.archive.org/web/20020202000000/http://odu.edu/>; rel=\"memento\"; "
      "datetime=\"garbage\",\n"
      "<http://web.archive.org/web/20030303000000/http://odu.edu/>; rel=\"last memento\"; "
      "datetime=\"Mon, 03 Mar 2003 00:00:00 GMT\",\n";
  const OriginalUri requested("http://odu.edu/");
  const auto parsed = parse_link_format(body, requested);
  CHECK(parsed.original == "http://odu.edu/");
  CHECK(parsed.malformed_datetimes == 1);
  REQUIRE(parsed.timemap.size() == 2);
  CHECK(parsed.timemap.mementos()[0].uri_m ==
        "http://web.archive.org/web/20010101000000/http://odu.edu/");
  CHECK(parsed.timemap.mementos()[1].datetime == day(2003, 3, 3));
  CHECK(parsed.timemap.mementos()[1].source_uri_r == requested);

  CHECK_THROWS_AS(parse_link_format("<http://x/; rel=\"memento\"", requested), MalformedLinkFormat);
  CHECK_THROWS_AS(parse_link_format("not link format at all", requested), MalformedLinkFormat);
  CHECK(parse_link_format("", requested).timemap.empty());
}

TEST_CASE("link params: quoted commas, case-insensitive names, rel lists") {
  const auto links = parse_links("<a>; REL=\"first memento\"; datetime=\"Mon, 01 Jan 2001 00:00:00 GMT\", <b>; rel=original");
  REQUIRE(links.size() == 2);
  CHECK(links[0].param("rel") == "first memento");
  CHECK(links[0].has_rel("memento"));
  CHECK_FALSE(links[0].has_rel("last"));
  CHECK(links[0].param("datetime") == "Mon, 01 Jan 2001 00:00:00 GMT");
  CHECK(links[1].has_rel("original"));
}

TEST_CASE("serialize then parse is the identity on single-URI TimeMaps") {
  std::mt19937_64 rng(11);
  const OriginalUri u("http://example.com/page?q=1");
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<MementoRecord> records;
    const int n = int(rng() % 30);
    for (int i = 0; i < n; ++i) {
      const MementoDatetime dt{std::chrono::sys_seconds(std::chrono::seconds(
          946684800 + (long long)(rng() % 600000000)))};
      records.push_back(rec("http://archive.test/web/" + dt.digits14() + "/" + u.str(), dt, u.str()));
    }
    const auto map = TimeMap::normalized({u}, records);
    const auto parsed = parse_link_format(serialize_link_format(map), u);
    CHECK(parsed.malformed_datetimes == 0);
    CHECK(parsed.timemap == map);
  }
}

TEST_CASE("merging TimeMaps") {
  const auto a = TimeMap::normalized({OriginalUri("http://a.com/")},
                                     {rec("a1", day(2010, 1, 1), "http://a.com/"),
                                      rec("a2", day(2012, 1, 1), "http://a.com/")});
  const auto b = TimeMap::normalized({OriginalUri("http://b.com/")},
                                     {rec("b1", day(2011, 1, 1), "http://b.com/"),
                                      rec("a2", day(2012, 1, 1), "http://b.com/")});
  const std::vector<TimeMap> maps{a, b};
  const auto merged = merge_timemaps(maps);
  REQUIRE(merged.size() == 3);
  CHECK(merged.mementos()[1].uri_m == "b1");
  CHECK(merged.mementos()[2].source_uri_r.str() == "http://a.com/");
  CHECK(merged.uri_rs().size() == 2);
  CHECK(merge_timemaps(std::span<const TimeMap>{}).empty());
}

TEST_CASE("date-range filtering is inclusive at both ends") {
  std::vector<MementoRecord> records;
  for (int i = 1; i <= 10; ++i) records.push_back(rec("m" + std::to_string(i), day(2000 + i, 1, 1)));
  const auto map = TimeMap::normalized({OriginalUri("http://example.com/")}, records);
  const auto f = filter_by_date_range(map, day(2003, 1, 1), day(2006, 1, 1));
  REQUIRE(f.size() == 4);
  CHECK(f.mementos().front().datetime == day(2003, 1, 1));
  CHECK(f.mementos().back().datetime == day(2006, 1, 1));
  CHECK(filter_by_date_range(map, day(1990, 1, 1), day(1991, 1, 1)).empty());
  CHECK_THROWS_AS(filter_by_date_range(map, day(2006, 1, 1), day(2003, 1, 1)), InvertedRange);

  // Random ranges against a linear scan.
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    auto lo = day(2000 + int(rng() % 12), 1 + unsigned(rng() % 12), 1);
    auto hi = day(2000 + int(rng() % 12), 1 + unsigned(rng() % 12), 1);
    if (hi < lo) std::swap(lo, hi);
    std::size_t expected = 0;
    for (const auto& r : records) expected += (lo <= r.datetime && r.datetime <= hi);
    CHECK(filter_by_date_range(map, lo, hi).size() == expected);
  }
}

TEST_CASE("subsequences keep URI-Rs and order") {
  std::vector<MementoRecord> records;
  for (int i = 0; i < 5; ++i) records.push_back(rec("m" + std::to_string(i), day(2000 + i, 1, 1)));
  const auto map = TimeMap::normalized({OriginalUri("http://example.com/")}, records);
  const std::vector<std::size_t> pos{0, 3, 4};
  const auto sub = take_subsequence(map, pos);
  REQUIRE(sub.size() == 3);
  CHECK(sub.mementos()[1].uri_m == "m3");
  CHECK(sub.uri_rs() == map.uri_rs());
}

TEST_CASE("monthly histograms include empty months") {
  const std::vector<MementoDatetime> dts{day(2015, 11, 3), day(2015, 11, 20), day(2016, 2, 1)};
  const auto h = build_histogram(dts);
  REQUIRE(h.bins.size() == 4);
  CHECK(h.bins[0] == HistogramBin{"2015-11", 2});
  CHECK(h.bins[1] == HistogramBin{"2015-12", 0});
  CHECK(h.bins[2] == HistogramBin{"2016-01", 0});
  CHECK(h.bins[3] == HistogramBin{"2016-02", 1});
  CHECK(h.total() == 3);
  CHECK(build_histogram(std::span<const MementoDatetime>{}).bins.empty());
}
